#ifndef FR_CORE_REGISTRY_HPP
#define FR_CORE_REGISTRY_HPP

#include <string>
#include <utility>
#include <vector>

#include "core/campanato.hpp"
#include "core/fractal.hpp"

namespace fr {

/// Builds a preset by id: "cantor:<rho>", "dust2d:<rho>", "cube:<n>", or a
/// product of those joined by '*'. Every factor is built at `depth`.
/// Unknown ids raise ErrorCode::Config naming the id.
FractalSet make_set(const std::string& id, int depth, double total_mass = 1.0);

/// (id pattern, description) for every preset family.
std::vector<std::pair<std::string, std::string>> list_sets();

Majorant make_majorant(const std::string& id);
std::vector<std::pair<std::string, std::string>> list_majorants();

/// Named test functions on R^n: "abs_half" |x1 - 1/2|, "xabsx" x1|x1|,
/// "square" |x|^2, "norm" |x|, "sin" sin(pi x1).
RealFunction make_function(const std::string& name);
std::vector<std::string> list_functions();

}  // namespace fr

#endif
