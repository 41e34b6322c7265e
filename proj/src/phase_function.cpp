#include "anisoscat/phase_function.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace anisoscat {

void validate_kernel(const ScatteringKernel& kernel) {
  if (kernel.coeffs.size() == 0) {
    throw KernelError("kernel has no coefficients");
  }
  if (kernel.order() > kMaxKernelOrder) {
    throw KernelError("kernel order " + std::to_string(kernel.order()) +
                      " exceeds the supported maximum " +
                      std::to_string(kMaxKernelOrder));
  }
  if (!kernel.coeffs.allFinite()) {
    throw KernelError("kernel has non-finite coefficients");
  }
}

Eigen::MatrixXd legendre_to_monomial_matrix(int order) {
  const int n = order + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  m(0, 0) = 1.0;  // P_0 = 1
  if (order >= 1) m(1, 1) = 1.0;  // P_1 = mu
  // (l+1) P_{l+1} = (2l+1) mu P_l - l P_{l-1}
  for (int l = 1; l < order; ++l) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    next.segment(1, l + 1) = (2.0 * l + 1.0) * m.col(l).head(l + 1);
    next -= static_cast<double>(l) * m.col(l - 1);
    m.col(l + 1) = next / (l + 1.0);
  }
  return m;
}

ScatteringKernel to_monomial(const ScatteringKernel& kernel) {
  validate_kernel(kernel);
  if (kernel.basis == Basis::Monomial) return kernel;
  ScatteringKernel out = kernel;
  out.basis = Basis::Monomial;
  out.coeffs = legendre_to_monomial_matrix(kernel.order()) * kernel.coeffs;
  return out;
}

double normalization_integral(const ScatteringKernel& kernel) {
  const ScatteringKernel mono = to_monomial(kernel);
  double integral = 0.0;
  for (int l = 0; l <= mono.order(); l += 2) {
    integral += mono.coeffs[l] * 2.0 / (l + 1.0);
  }
  return integral;
}

ScatteringKernel normalize(const ScatteringKernel& kernel) {
  validate_kernel(kernel);
  if (kernel.normalized) return kernel;
  const double integral = normalization_integral(kernel);
  if (!(integral > 0.0)) throw NonPositiveNormalization(integral);
  ScatteringKernel out = kernel;
  out.coeffs /= integral;
  out.normalized = true;
  return out;
}

double evaluate(const ScatteringKernel& kernel, double mu) {
  if (!(std::abs(mu) <= 1.0)) {
    throw DomainError("scattering cosine outside [-1, 1]: " + std::to_string(mu));
  }
  const ScatteringKernel mono = to_monomial(kernel);
  double value = 0.0;
  for (int l = mono.order(); l >= 0; --l) value = value * mu + mono.coeffs[l];
  return value;
}

double polynomial_moment(const ScatteringKernel& kernel, int k) {
  if (k < 0) throw DomainError("moment order must be non-negative");
  if (!kernel.normalized) {
    throw KernelError("polynomial_moment requires a normalized kernel");
  }
  const ScatteringKernel mono = to_monomial(kernel);
  double moment = 0.0;
  // Odd-total-degree terms integrate to zero over the symmetric interval.
  for (int l = (k % 2 == 0) ? 0 : 1; l <= mono.order(); l += 2) {
    moment += mono.coeffs[l] * 2.0 / (l + k + 1.0);
  }
  return moment;
}

double mean_cosine(const ScatteringKernel& kernel) {
  return polynomial_moment(kernel, 1);
}

void validate_positivity(const ScatteringKernel& kernel, int grid_points) {
  if (grid_points < 2) throw DomainError("positivity grid needs >= 2 points");
  const ScatteringKernel mono = to_monomial(kernel);
  double worst_mu = 0.0;
  double worst = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double mu = -1.0 + 2.0 * i / (grid_points - 1.0);
    double value = 0.0;
    for (int l = mono.order(); l >= 0; --l) value = value * mu + mono.coeffs[l];
    if (value < worst) {
      worst = value;
      worst_mu = mu;
    }
  }
  if (worst < -1e-12) throw NegativeDensity(worst_mu, worst);
}

namespace {

std::string strip_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  return text;
}

}  // namespace

ScatteringKernel parse_kernel(const std::string& text) {
  const std::string compact = strip_whitespace(text);
  ScatteringKernel kernel;
  bool have_basis = false;
  bool have_coeffs = false;
  std::stringstream fields(compact);
  std::string field;
  while (std::getline(fields, field, ';')) {
    if (field.empty()) continue;
    const auto eq = field.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("malformed kernel field: '" + field + "'");
    }
    const std::string key = to_lower(field.substr(0, eq));
    const std::string value = field.substr(eq + 1);
    if (key == "basis") {
      const std::string basis = to_lower(value);
      if (basis == "legendre") {
        kernel.basis = Basis::Legendre;
      } else if (basis == "monomial") {
        kernel.basis = Basis::Monomial;
      } else {
        throw ConfigError("unknown kernel basis: '" + value + "'");
      }
      have_basis = true;
    } else if (key == "coeffs") {
      std::vector<double> coeffs;
      std::stringstream items(value);
      std::string item;
      while (std::getline(items, item, ',')) {
        try {
          std::size_t used = 0;
          coeffs.push_back(std::stod(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw ConfigError("bad kernel coefficient: '" + item + "'");
        }
      }
      kernel.coeffs = Eigen::Map<const Eigen::VectorXd>(
          coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
      have_coeffs = true;
    } else {
      throw ConfigError("unknown kernel field: '" + key + "'");
    }
  }
  if (!have_basis || !have_coeffs) {
    throw ConfigError("kernel spec needs both basis= and coeffs=");
  }
  validate_kernel(kernel);
  return kernel;
}

std::string format_kernel(const ScatteringKernel& kernel) {
  std::ostringstream out;
  out.precision(17);
  out << "basis=" << (kernel.basis == Basis::Legendre ? "legendre" : "monomial")
      << "; coeffs=";
  for (int l = 0; l < kernel.coeffs.size(); ++l) {
    if (l > 0) out << ",";
    out << kernel.coeffs[l];
  }
  return out.str();
}

}  // namespace anisoscat
