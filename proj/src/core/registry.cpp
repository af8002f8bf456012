#include "core/registry.hpp"

#include <cmath>
#include <sstream>

namespace fr {

namespace {

double parse_ratio(const std::string& text, const std::string& id) {
  try {
    std::size_t used = 0;
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      std::size_t u2 = 0;
      const double a = std::stod(text.substr(0, slash), &used);
      const double b = std::stod(text.substr(slash + 1), &u2);
      if (used == slash && u2 == text.size() - slash - 1 && b != 0.0) return a / b;
    }
  } catch (const std::exception&) {
  }
  fail(ErrorCode::Config, "unknown set id '" + id + "'");
}

FractalSet make_factor(const std::string& id, int depth, double total_mass) {
  const auto colon = id.find(':');
  if (colon == std::string::npos) fail(ErrorCode::Config, "unknown set id '" + id + "'");
  const std::string kind = id.substr(0, colon);
  const std::string arg = id.substr(colon + 1);
  try {
    if (kind == "cantor") return FractalSet::build(IFS::cantor(parse_ratio(arg, id)), depth, total_mass);
    if (kind == "dust2d") return FractalSet::build(IFS::dust2d(parse_ratio(arg, id)), depth, total_mass);
    if (kind == "cube") {
      const double n = parse_ratio(arg, id);
      if (n != std::floor(n)) fail(ErrorCode::Config, "unknown set id '" + id + "'");
      return FractalSet::build(IFS::unit_cube(static_cast<int>(n)), depth, total_mass);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config || e.code() == ErrorCode::Overflow) throw;
    fail(ErrorCode::Config, "invalid set id '" + id + "': " + e.what());
  }
  fail(ErrorCode::Config, "unknown set id '" + id + "'");
}

}  // namespace

FractalSet make_set(const std::string& id, int depth, double total_mass) {
  if (depth < 1) fail(ErrorCode::Config, "set depth must be at least 1");
  std::vector<std::string> parts;
  std::stringstream ss(id);
  std::string item;
  while (std::getline(ss, item, '*')) parts.push_back(item);
  if (parts.empty()) fail(ErrorCode::Config, "unknown set id '" + id + "'");
  FractalSet out = make_factor(parts[0], depth, total_mass);
  for (std::size_t i = 1; i < parts.size(); ++i) out = product_set(out, make_factor(parts[i], depth, 1.0));
  return out;
}

std::vector<std::pair<std::string, std::string>> list_sets() {
  return {
      {"cantor:<rho>", "Cantor set in [0,1], two maps of ratio rho in (0, 1/2); e.g. cantor:1/3"},
      {"dust2d:<rho>", "Cantor dust in [0,1]^2, four corner maps of ratio rho in (0, 1/2]; e.g. dust2d:1/4"},
      {"cube:<n>", "unit cube [0,1]^n, n <= 4, as 2^n maps of ratio 1/2; e.g. cube:1"},
      {"<a>*<b>", "product of presets, e.g. cantor:1/3*cantor:1/3"},
  };
}

Majorant make_majorant(const std::string& id) { return Majorant::parse(id); }

std::vector<std::pair<std::string, std::string>> list_majorants() {
  return {
      {"power:<lambda>", "omega(t) = t^lambda; quasipower for 0 < lambda <= k with C_omega = 1/lambda"},
      {"const:<c>", "omega(t) = c; allowed in the Campanato seminorm, not quasipower"},
      {"table:<t1>/<v1>,...", "piecewise linear through (0,0) and the knots, last slope extended"},
  };
}

RealFunction make_function(const std::string& name) {
  if (name == "abs_half") return [](std::span<const double> x) { return std::abs(x[0] - 0.5); };
  if (name == "xabsx") return [](std::span<const double> x) { return x[0] * std::abs(x[0]); };
  if (name == "square")
    return [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
  if (name == "norm")
    return [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    };
  if (name == "sin") return [](std::span<const double> x) { return std::sin(M_PI * x[0]); };
  fail(ErrorCode::Config, "unknown function '" + name + "'");
}

std::vector<std::string> list_functions() { return {"abs_half", "xabsx", "square", "norm", "sin"}; }

}  // namespace fr
