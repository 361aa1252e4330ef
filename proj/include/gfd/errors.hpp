#pragma once

#include <stdexcept>
#include <string>

namespace gfd {

// Invalid arguments or configuration. CLI maps this to exit code 2.
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input files; message names the offending line.
struct format_error : std::runtime_error {
    explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failures. CLI maps these to exit code 3.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct singular_stencil_error : numerical_error {
    int point = -1;
    singular_stencil_error(int point_index, const std::string& what)
        : numerical_error(what), point(point_index) {}
};

struct degenerate_cloud_error : numerical_error {
    explicit degenerate_cloud_error(const std::string& what) : numerical_error(what) {}
};

struct degenerate_input_error : numerical_error {
    explicit degenerate_input_error(const std::string& what) : numerical_error(what) {}
};

struct solver_error : numerical_error {
    double final_residual = 0.0;
    solver_error(const std::string& what, double residual)
        : numerical_error(what), final_residual(residual) {}
};

} // namespace gfd
