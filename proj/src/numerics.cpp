#include "lmbs/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>

namespace lmbs::numerics {

GaussRule make_gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

const GaussRule& gauss_legendre8() {
  static const GaussRule rule = make_gauss_legendre(8);
  return rule;
}

double blocked_dot(std::span<const double> a, std::span<const double> b) noexcept {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  std::array<double, 8> acc{};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
    for (std::size_t l = 0; l < 8; ++l) acc[l] += a[i + l] * b[i + l];
  double rest = 0.0;
  for (; i < n; ++i) rest += a[i] * b[i];
  const double s01 = acc[0] + acc[1], s23 = acc[2] + acc[3];
  const double s45 = acc[4] + acc[5], s67 = acc[6] + acc[7];
  return ((s01 + s23) + (s45 + s67)) + rest;
}

void volterra_path(double sigma, double scale, std::span<const double> reversed,
                   std::span<const double> noise, std::span<double> v, std::span<double> work) {
  const std::size_t n = v.size();
  const std::size_t len = reversed.size();
  if (n == 0) return;
  if (len + 1 < n || noise.size() + 1 < n || work.size() < n)
    throw std::invalid_argument("volterra_path: buffers are too short");
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = sigma + scale * blocked_dot(work.first(i), reversed.subspan(len - i, i));
    if (i < noise.size()) work[i] = v[i] * noise[i];
  }
}

namespace {
constexpr double kZetaShift = 16.0;
// B_{2j} / (2j)! for j = 1..8
constexpr std::array<double, 8> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};
}  // namespace

std::size_t hurwitz_zeta_terms(double q) noexcept {
  return q >= kZetaShift ? 0 : static_cast<std::size_t>(std::ceil(kZetaShift - q));
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0))
    throw std::domain_error("hurwitz_zeta requires s > 1 and q > 0");
  const std::size_t terms = hurwitz_zeta_terms(q);
  double sum = 0.0;
  for (std::size_t k = 0; k < terms; ++k) sum += std::pow(q + static_cast<double>(k), -s);
  const double x = q + static_cast<double>(terms);
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;                 // s (s+1) ... (s+2j-2)
  double power = std::pow(x, -s - 1.0);
  const double inv_x2 = 1.0 / (x * x);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    tail += kBernoulliOverFactorial[j] * rising * power;
    const double m = static_cast<double>(2 * j + 1);
    rising *= (s + m) * (s + m + 1.0);
    power *= inv_x2;
  }
  return sum + tail;
}

double log_tail_remainder(double amplitude, double rate, double power, double upper) {
  if (amplitude == 0.0) return 0.0;
  if (rate > 0.0) return amplitude * std::exp(-rate * upper) * std::pow(upper, -power) / rate;
  if (power > 1.0) return amplitude * std::pow(upper, 1.0 - power) / (power - 1.0);
  throw std::domain_error("log_tail_remainder: integrand is not integrable");
}

}  // namespace lmbs::numerics
