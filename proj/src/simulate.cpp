#include "lmbs/simulate.hpp"

#include "lmbs/error.hpp"
#include "lmbs/numerics.hpp"
#include "lmbs/rng.hpp"
#include "parallel.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lmbs {

Eigen::Index PathEnsemble::column(double time, const char* op) const {
  const double step = h * static_cast<double>(record_every);
  const double r = time / step;
  const double idx = std::round(r);
  if (!(time >= 0.0) || std::abs(r - idx) > 1e-9 * std::max(1.0, r) || idx >= static_cast<double>(t.size()))
    fail(ErrorKind::Config, "simulate", op, "time " + std::to_string(time) + " is not on the recorded grid");
  return static_cast<Eigen::Index>(idx);
}

PathEnsemble simulate(const Model& m, const SimConfig& sim) {
  const Eigen::Index n = grid_steps(sim.T, sim.h, "simulate", "simulate");
  if (sim.paths < 1) fail(ErrorKind::Config, "simulate", "simulate", "paths must be >= 1");
  if (!(sim.s0 > 0.0)) fail(ErrorKind::Config, "simulate", "simulate", "s0 must be positive");
  if (sim.record_every < 1 || n % sim.record_every != 0)
    fail(ErrorKind::Config, "simulate", "simulate", "record_every must divide the number of steps");

  const Eigen::Index records = n / sim.record_every + 1;
  PathEnsemble e;
  e.h = sim.h;
  e.record_every = sim.record_every;
  e.mu = m.mu();
  e.t.resize(records);
  for (Eigen::Index r = 0; r < records; ++r)
    e.t[r] = static_cast<double>(r * sim.record_every) * sim.h;
  e.v.resize(sim.paths, records);
  e.x.resize(sim.paths, records);
  e.s.resize(sim.paths, records);
  e.db.setZero(sim.paths, records);

  // reversed[n - m] = K(m h), m = 1..n
  const Eigen::VectorXd reversed = kernel_grid(m.kernel(), sim.h, n).reverse();
  const double sqrt_h = std::sqrt(sim.h);
  const double scale = m.beta() * sqrt_h;
  const double sigma = m.sigma();
  const double mu = m.mu();
  const std::span<const double> table(reversed.data(), static_cast<std::size_t>(n));

  detail::parallel_chunks(sim.paths, sim.threads, [&](long begin, long end) {
    std::vector<double> z(static_cast<std::size_t>(n));
    std::vector<double> v(static_cast<std::size_t>(n + 1));
    std::vector<double> work(static_cast<std::size_t>(n + 1));
    for (long p = begin; p < end; ++p) {
      rng::Substream(sim.seed, static_cast<std::uint64_t>(p)).fill_normal(z);
      numerics::volterra_path(sigma, scale, table, z, v, work);
      double x = 0.0;
      double s = sim.s0;
      for (Eigen::Index i = 0; i <= n; ++i) {
        if (i % sim.record_every == 0) {
          const Eigen::Index r = i / sim.record_every;
          e.v(p, r) = v[static_cast<std::size_t>(i)];
          e.x(p, r) = x;
          e.s(p, r) = s;
          if (i < n) e.db(p, r) = sqrt_h * z[static_cast<std::size_t>(i)];
        }
        if (i == n) break;
        const double vi = v[static_cast<std::size_t>(i)];
        const double dbi = sqrt_h * z[static_cast<std::size_t>(i)];
        x += vi * dbi;
        s *= std::exp((mu - 0.5 * vi * vi) * sim.h + vi * dbi);
      }
    }
  });
  return e;
}

MomentEstimate column_moments(const Eigen::Ref<const Eigen::VectorXd>& column) {
  MomentEstimate out;
  const auto n = static_cast<double>(column.size());
  out.mean = column.mean();
  if (column.size() < 2) {
    out.se_defined = false;
    out.se_mean = out.se_var = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const Eigen::ArrayXd c = column.array() - out.mean;
  const double m2 = c.square().mean();
  const double m4 = c.square().square().mean();
  out.var = c.square().sum() / (n - 1.0);
  out.se_mean = std::sqrt(out.var / n);
  out.se_var = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return out;
}

MomentEstimate empirical_moments(const PathEnsemble& e, double t) {
  return column_moments(e.v.col(e.column(t, "empirical_moments")));
}

CovEstimate empirical_autocov(const PathEnsemble& e, double t, double delta) {
  if (!(delta >= 0.0)) fail(ErrorKind::Config, "simulate", "empirical_autocov", "delta must be >= 0");
  const Eigen::VectorXd a = e.v.col(e.column(t, "empirical_autocov"));
  const Eigen::VectorXd b = e.v.col(e.column(t + delta, "empirical_autocov"));
  CovEstimate out;
  const auto n = static_cast<double>(a.size());
  const Eigen::ArrayXd prod = (a.array() - a.mean()) * (b.array() - b.mean());
  if (a.size() < 2) {
    out.se_defined = false;
    out.se = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.cov = prod.sum() / (n - 1.0);
  out.se = std::sqrt((prod - prod.mean()).square().mean() / n);
  return out;
}

CorrEstimate returns_efficiency(const PathEnsemble& e, double delta, double Delta, double t) {
  if (!(delta >= 0.0) || !(Delta > delta))
    fail(ErrorKind::Config, "simulate", "returns_efficiency",
         "return windows overlap: need Delta > delta >= 0");
  auto returns = [&](double from) {
    const Eigen::Index c0 = e.column(from, "returns_efficiency");
    const Eigen::Index c1 = e.column(from + delta, "returns_efficiency");
    // R = X + mu t
    return Eigen::ArrayXd((e.x.col(c1).array() + e.mu * e.t[c1]) - (e.x.col(c0).array() + e.mu * e.t[c0]));
  };
  const Eigen::ArrayXd r1 = returns(t);
  const Eigen::ArrayXd r2 = returns(t + Delta);
  CorrEstimate out;
  const Eigen::ArrayXd c1 = r1 - r1.mean();
  const Eigen::ArrayXd c2 = r2 - r2.mean();
  const double s1 = std::sqrt(c1.square().mean());
  const double s2 = std::sqrt(c2.square().mean());
  if (s1 == 0.0 || s2 == 0.0) {
    out.degenerate = true;
    return out;
  }
  const Eigen::ArrayXd z = (c1 / s1) * (c2 / s2);
  out.corr = z.mean();
  out.se = std::sqrt((z - out.corr).square().mean() / static_cast<double>(z.size()));
  return out;
}

}  // namespace lmbs
