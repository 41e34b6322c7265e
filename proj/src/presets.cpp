#include "anisoscat/presets.hpp"

#include <algorithm>
#include <cctype>

namespace anisoscat {

namespace {

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return text;
}

// (L+1)/2 mu^L, the normalized even monomial.
ScatteringKernel symmetric_kernel(int order) {
  ScatteringKernel kernel;
  kernel.basis = Basis::Monomial;
  kernel.coeffs = Eigen::VectorXd::Zero(order + 1);
  kernel.coeffs[order] = (order + 1.0) / 2.0;
  return kernel;
}

// Legendre coefficients all equal to 1/(L+1); `backward` negates the odd ones.
ScatteringKernel legendre_series_kernel(int order, bool backward) {
  ScatteringKernel kernel;
  kernel.basis = Basis::Legendre;
  kernel.coeffs = Eigen::VectorXd::Constant(order + 1, 1.0 / (order + 1.0));
  if (backward) {
    for (int l = 1; l <= order; l += 2) kernel.coeffs[l] = -kernel.coeffs[l];
  }
  return kernel;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "isotropic", "S2", "S4", "S6", "F1", "F3", "F5", "F7",
      "B1",        "B3", "B5", "B7"};
  return names;
}

bool is_preset(const std::string& name) {
  const std::string key = to_lower(name);
  for (const std::string& candidate : preset_names()) {
    if (to_lower(candidate) == key) return true;
  }
  return false;
}

ScatteringKernel preset_kernel(const std::string& name) {
  const std::string key = to_lower(name);
  if (key == "isotropic") {
    ScatteringKernel kernel;
    kernel.basis = Basis::Monomial;
    kernel.coeffs = Eigen::VectorXd::Constant(1, 0.5);
    return kernel;
  }
  if (key.size() == 2 && (key[0] == 's' || key[0] == 'f' || key[0] == 'b') &&
      std::isdigit(static_cast<unsigned char>(key[1]))) {
    const int order = key[1] - '0';
    if (key[0] == 's' && (order == 2 || order == 4 || order == 6)) {
      return symmetric_kernel(order);
    }
    if ((key[0] == 'f' || key[0] == 'b') &&
        (order == 1 || order == 3 || order == 5 || order == 7)) {
      return legendre_series_kernel(order, key[0] == 'b');
    }
  }
  throw ConfigError("unknown kernel preset: '" + name + "'");
}

ScatteringKernel resolve_kernel(const std::string& spec) {
  if (is_preset(spec)) return preset_kernel(spec);
  if (spec.find('=') != std::string::npos) return parse_kernel(spec);
  throw ConfigError("kernel '" + spec +
                    "' is neither a preset nor an inline basis=...; coeffs=... spec");
}

}  // namespace anisoscat
