#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lmbs {

/// Point mass. For kappa the location is the lag rho_j >= 0; for lambda the
/// location u in [0, tau] stands for mass at -u.
struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

// Density families. Every parametric family is nonnegative and continuous on
// (0, inf); only tables may carry signed values.

/// k(t) = scale * (1+t)^(-1-alpha)
struct PowerLaw {
  double scale = 1.0;
  double alpha = 1.0;
};

/// k(t) = scale * (1+t)^(-1-alpha) * log(e+t)^(-log_exponent)
struct PowerLogLaw {
  double scale = 1.0;
  double alpha = 1.0;
  double log_exponent = 0.0;
};

/// k(t) = scale * exp(-rate t)
struct Exponential {
  double scale = 1.0;
  double rate = 1.0;
};

/// Piecewise-linear interpolation of samples (t_i, k_i), zero before t_0.
/// Beyond the last sample the density continues as
/// k_N * ((1+t)/(1+t_N))^(-1-tail_alpha) when a tail index is declared, and
/// is zero otherwise.
struct Tabulated {
  std::vector<double> t;
  std::vector<double> k;
  std::optional<double> tail_alpha;
};

struct ZeroDensity {};

using DensityFamily = std::variant<ZeroDensity, PowerLaw, PowerLogLaw, Exponential, Tabulated>;

/// How the density behaves at infinity; drives every divergence verdict.
enum class TailKind {
  None,               // identically zero beyond a finite point
  Light,              // exponentially decaying
  RegularlyVarying,   // k(t) ~ L(t) t^(-1-alpha), L = scale * log(t)^(-p)
  Unknown,            // table without a declared tail
};

struct TailInfo {
  TailKind kind = TailKind::None;
  double alpha = 0.0;         // tail index of k (RegularlyVarying only)
  double scale = 0.0;         // L(t) -> scale * log(t)^(-log_exponent)
  double log_exponent = 0.0;
};

enum class SupportKind { NonnegativeHalfLine, DelayInterval };

struct Support {
  SupportKind kind = SupportKind::NonnegativeHalfLine;
  double tau = 0.0;  // DelayInterval only

  static Support half_line() { return {}; }
  static Support delay(double tau) { return {SupportKind::DelayInterval, tau}; }
};

/// Finite signed measure made of finitely many atoms plus a density. Immutable
/// after construction; the constructor validates every invariant.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(Support support, std::vector<Atom> atoms, DensityFamily density);

  static SignedMeasure zero(Support support = Support::half_line()) {
    return SignedMeasure(support, {}, ZeroDensity{});
  }

  const Support& support() const noexcept { return support_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const DensityFamily& density() const noexcept { return density_; }
  bool is_delay() const noexcept { return support_.kind == SupportKind::DelayInterval; }

  /// Upper end of the region where the density lives: tau for lambda,
  /// infinity for kappa.
  double upper() const noexcept;

 private:
  Support support_{};
  std::vector<Atom> atoms_;
  DensityFamily density_{ZeroDensity{}};
};

// --- density primitives ---------------------------------------------------

double density_value(const DensityFamily& d, double t);

/// int_x^inf k(s) ds. Throws TailUndetermined for a table without a declared
/// tail whose last sample is not negligible.
double density_tail(const DensityFamily& d, double x);

/// int_a^b k(s) ds for 0 <= a <= b <= inf.
double density_mass(const DensityFamily& d, double a, double b);

/// int_a^b |k(s)| ds.
double density_abs_mass(const DensityFamily& d, double a, double b);

TailInfo tail_info(const DensityFamily& d);

/// True when the family takes no negative values.
bool density_nonnegative(const DensityFamily& d);

std::string family_name(const DensityFamily& d);

// --- measure operations ---------------------------------------------------

double total_mass(const SignedMeasure& m);
double total_variation(const SignedMeasure& m);

constexpr double kBalanceTolClosedForm = 1e-9;
constexpr double kBalanceTolTabulated = 1e-6;

/// Default tolerance: the tabulated one when either measure uses a table.
double default_balance_tolerance(const SignedMeasure& lambda, const SignedMeasure& kappa);

struct Balance {
  bool balanced = true;
  double discrepancy = 0.0;  // total_mass(lambda) - total_mass(kappa)
};

Balance validate_balance(const SignedMeasure& lambda, const SignedMeasure& kappa, double tol);

enum class MomentClass { Finite, Infinite, Undetermined };

struct FirstMoment {
  MomentClass kind = MomentClass::Undetermined;
  double value = 0.0;  // Finite only
};

/// int_0^inf s |kappa|(ds).
FirstMoment first_moment_class(const SignedMeasure& kappa);

/// Whether every atom weight and the density are >= 0 (resp. <= 0).
bool is_nonnegative(const SignedMeasure& m);
bool is_nonpositive(const SignedMeasure& m);

/// lambda = single atom at 0 carrying kappa's total mass; the canonical
/// balancing choice of the regularly varying examples.
SignedMeasure balancing_point_mass(const SignedMeasure& kappa, double tau = 0.0);

}  // namespace lmbs
