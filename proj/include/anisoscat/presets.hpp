#pragma once

#include <string>
#include <vector>

#include "anisoscat/phase_function.hpp"

namespace anisoscat {

// Built-in phase functions: "isotropic", the even monomials S2/S4/S6, the
// forward Legendre series F1/F3/F5/F7 (all coefficients equal) and the
// backward series B1/B3/B5/B7 (odd coefficients negated). Names match
// case-insensitively; the registry is closed.
const std::vector<std::string>& preset_names();

bool is_preset(const std::string& name);

// Kernel as tabulated, before normalization. Throws ConfigError for unknown
// names.
ScatteringKernel preset_kernel(const std::string& name);

// Preset name or inline `basis=...; coeffs=...` spec.
ScatteringKernel resolve_kernel(const std::string& spec);

}  // namespace anisoscat
