#include "lmbs/discrete.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"
#include "lmbs/rng.hpp"
#include "parallel.hpp"

#include <cmath>
#include <span>

namespace lmbs {

namespace {

constexpr std::size_t kZetaCutoff = 100000;

struct Validator {
  void operator()(const PowerLawSeq& s) const {
    if (!(s.scale > 0.0) || !(s.alpha > 0.0) || !std::isfinite(s.scale) || !std::isfinite(s.alpha))
      fail(ErrorKind::Config, "discrete", "validate", "PowerLawSeq needs scale > 0 and alpha > 0");
  }
  void operator()(const FiniteSeq& s) const {
    for (double a : s.a)
      if (!(a >= 0.0) || !std::isfinite(a))
        fail(ErrorKind::Config, "discrete", "validate", "FiniteSeq entries must be finite and >= 0");
  }
  void operator()(const FromKernel& s) const {
    if (!(s.h > 0.0) || !std::isfinite(s.h))
      fail(ErrorKind::Config, "discrete", "validate", "FromKernel step must be positive");
  }
};

}  // namespace

void validate(const DiscreteModel& m) {
  if (!std::isfinite(m.sigma) || !std::isfinite(m.beta))
    fail(ErrorKind::Config, "discrete", "validate", "sigma and beta must be finite");
  std::visit(Validator{}, m.a_seq);
}

double effective_beta(const DiscreteModel& m) {
  if (const auto* fk = std::get_if<FromKernel>(&m.a_seq)) return m.beta * std::sqrt(fk->h);
  return m.beta;
}

TailSum k_seq(const DiscreteModel& m, std::size_t n) {
  validate(m);
  const auto nd = static_cast<double>(n);
  if (const auto* p = std::get_if<PowerLawSeq>(&m.a_seq))
    return {p->scale * numerics::hurwitz_zeta(1.0 + p->alpha, nd + 2.0), numerics::hurwitz_zeta_terms(nd + 2.0)};
  if (const auto* f = std::get_if<FiniteSeq>(&m.a_seq)) {
    double sum = 0.0;
    for (std::size_t j = f->a.size(); j-- > n + 1;) sum += f->a[j];
    return {sum, f->a.size() > n + 1 ? f->a.size() - n - 1 : 0};
  }
  const auto& fk = std::get<FromKernel>(m.a_seq);
  return {fk.kernel(static_cast<double>(n + 1) * fk.h), 0};
}

Eigen::VectorXd k_table(const DiscreteModel& m, std::size_t count) {
  validate(m);
  Eigen::VectorXd out(static_cast<Eigen::Index>(count));
  if (const auto* fk = std::get_if<FromKernel>(&m.a_seq)) {
    if (count > 0) out = kernel_grid(fk->kernel, fk->h, static_cast<Eigen::Index>(count));
    for (Eigen::Index n = 0; n < out.size(); ++n) {
      const bool increasing = n > 0 && out[n] > out[n - 1];
      if (out[n] < 0.0 || increasing)
        fail(ErrorKind::Config, "discrete", "k_table",
             "FromKernel needs K nonnegative and non-increasing on the lattice (a_n >= 0)");
    }
    return out;
  }
  for (std::size_t n = 0; n < count; ++n) out[static_cast<Eigen::Index>(n)] = k_seq(m, n).value;
  return out;
}

DiscreteEnsemble simulate_discrete(const DiscreteModel& m, long steps, long paths, std::uint64_t seed,
                                   int threads) {
  validate(m);
  if (steps < 1 || paths < 1)
    fail(ErrorKind::Config, "discrete", "simulate_discrete", "steps and paths must be >= 1");
  const auto n = static_cast<std::size_t>(steps);
  const Eigen::VectorXd reversed = k_table(m, n - 1).reverse();
  const std::span<const double> table(reversed.data(), n - 1);
  const double scale = effective_beta(m);

  DiscreteEnsemble e;
  e.v.resize(paths, steps);
  e.u.resize(paths, steps);
  e.x.resize(paths, steps + 1);
  detail::parallel_chunks(paths, threads, [&](long begin, long end) {
    std::vector<double> xi(n), v(n), work(n);
    for (long p = begin; p < end; ++p) {
      const rng::Substream stream(seed, static_cast<std::uint64_t>(p));
      if (m.noise == Noise::StandardNormal)
        stream.fill_normal(xi);
      else
        stream.fill_rademacher(xi);
      numerics::volterra_path(m.sigma, scale, table, xi, v, work);
      double x = 0.0;
      e.x(p, 0) = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<Eigen::Index>(i);
        const double u = v[i] * xi[i];
        e.v(p, c) = v[i];
        e.u(p, c) = u;
        x += u;
        e.x(p, c + 1) = x;
      }
    }
  });
  return e;
}

DiscreteStationarity discrete_stationarity(const DiscreteModel& m, double eps) {
  validate(m);
  DiscreteStationarity out;
  const double b = effective_beta(m);
  if (b == 0.0) {
    out.verdict.stationary = true;
    return out;
  }
  double sum = 0.0;
  if (const auto* f = std::get_if<FiniteSeq>(&m.a_seq)) {
    const std::size_t len = f->a.empty() ? 0 : f->a.size() - 1;
    for (std::size_t n = 0; n < len; ++n) {
      const double k = k_seq(m, n).value;
      sum += k * k;
    }
    out.terms = len;
  } else if (const auto* p = std::get_if<PowerLawSeq>(&m.a_seq)) {
    if (p->alpha <= 0.5) {
      out.verdict.reason = NonStationaryReason::KernelNotL2;
      return out;
    }
    for (std::size_t n = 0; n < kZetaCutoff; ++n) {
      const double k = k_seq(m, n).value;
      sum += k * k;
    }
    // K_n / c = zeta(1+a, q) ~ q^-a / a + q^(-1-a) / 2 + (1+a) q^(-2-a) / 12, q = n + 2
    const double a = p->alpha;
    const double q = static_cast<double>(kZetaCutoff) + 2.0;
    const double tail = numerics::hurwitz_zeta(2.0 * a, q) / (a * a) + numerics::hurwitz_zeta(2.0 * a + 1.0, q) / a +
                        numerics::hurwitz_zeta(2.0 * a + 2.0, q) * (0.25 + (1.0 + a) / (6.0 * a));
    sum += p->scale * p->scale * tail;
    out.terms = kZetaCutoff;
  } else {
    const auto& fk = std::get<FromKernel>(m.a_seq);
    switch (integrability(fk.kernel, 2)) {
      case IntegralVerdict::Divergent:
        out.verdict.reason = NonStationaryReason::KernelNotL2;
        return out;
      case IntegralVerdict::Undetermined:
        out.verdict.reason = NonStationaryReason::Undetermined;
        return out;
      case IntegralVerdict::Finite:
        break;
    }
    const double reach = std::max(default_quadrature(fk.kernel).horizon, fk.kernel.smooth_from());
    const auto cutoff = static_cast<std::size_t>(std::ceil(reach / fk.h));
    for (std::size_t n = 0; n < cutoff; ++n) {
      const double k = fk.kernel(static_cast<double>(n + 1) * fk.h);
      sum += k * k;
    }
    // Euler-Maclaurin: sum_{n>=N} f((n+1) h) ~ (1/h) int_{x_N}^inf f + f(x_N) / 2
    const double x_n = static_cast<double>(cutoff + 1) * fk.h;
    const double k_n = fk.kernel.tail_value(x_n);
    sum += tail_product(fk.kernel, x_n, 0.0) / fk.h + 0.5 * k_n * k_n;
    out.terms = cutoff;
  }
  Stationarity& s = out.verdict;
  s.margin = b * b * sum;
  s.near_critical = std::abs(s.margin - 1.0) <= kNearCriticalBand;
  s.stationary = s.margin < 1.0 - eps;
  if (!s.stationary) s.reason = NonStationaryReason::MarginAtLeastOne;
  return out;
}

MemoryClass discrete_memory(const DiscreteModel& m) {
  validate(m);
  if (const auto* p = std::get_if<PowerLawSeq>(&m.a_seq)) return p->alpha <= 1.0 ? MemoryClass::Long : MemoryClass::Short;
  if (std::holds_alternative<FiniteSeq>(m.a_seq)) return MemoryClass::Short;
  // sum_j j a_j = sum_n K_n, finite iff K is integrable
  switch (integrability(std::get<FromKernel>(m.a_seq).kernel, 1)) {
    case IntegralVerdict::Finite: return MemoryClass::Short;
    case IntegralVerdict::Divergent: return MemoryClass::Long;
    case IntegralVerdict::Undetermined: return MemoryClass::Undetermined;
  }
  return MemoryClass::Undetermined;
}

}  // namespace lmbs
