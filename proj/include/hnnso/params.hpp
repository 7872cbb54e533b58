#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hnnso {

/// Mutable view of one named parameter block. Views alias the owning
/// model's storage; they stay valid as long as the model does.
struct ParamRef {
    std::string name;
    double* data = nullptr;
    std::vector<std::size_t> shape;
    bool is_bias = false;

    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t d : shape) n *= d;
        return shape.empty() ? 0 : n;
    }
};

/// Read-only counterpart of ParamRef.
struct ParamCRef {
    std::string name;
    const double* data = nullptr;
    std::vector<std::size_t> shape;
    bool is_bias = false;

    std::size_t size() const {
        std::size_t n = 1;
        for (std::size_t d : shape) n *= d;
        return shape.empty() ? 0 : n;
    }
};

std::vector<ParamCRef> as_const(const std::vector<ParamRef>& refs);

}  // namespace hnnso
