#include "hardy/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <tuple>

#include "hardy/errors.hpp"
#include "hardy/parallel.hpp"
#include "hardy/summation.hpp"
#include "hardy/zeta.hpp"

namespace hardy {

namespace {

using std::numbers::pi;

constexpr double kHeadEnd = 100.0;

struct GaussRule {
  std::array<double, 16> x{};
  std::array<double, 16> w{};
};

const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.x[i] = x;
      r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

double gauss_panel(const std::function<double(double)>& f, double lo, double hi) {
  const GaussRule& g = gauss16();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) acc += g.w[i] * f(mid + half * g.x[i]);
  return acc * half;
}

struct SimpsonState {
  const std::function<double(double)>* f;
  std::int64_t evaluations = 0;
};

double simpson_recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole, double tol,
                       int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  st.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

std::pair<double, std::int64_t> simpson_panel(const std::function<double(double)>& f, double lo, double hi, double tol) {
  SimpsonState st{&f};
  const double fa = f(lo);
  const double fm = f(0.5 * (lo + hi));
  const double fb = f(hi);
  st.evaluations = 3;
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  const double v = simpson_recurse(st, lo, hi, fa, fm, fb, whole, tol, 40);
  return {v, st.evaluations};
}

// Panel boundaries with length (16 / points_per_oscillation) local zero spacings,
// taken as the smaller of the spacings at both ends of the step.
std::vector<double> panel_edges(double a, double b, int ppo) {
  std::vector<double> edges{a};
  const double factor = 16.0 / ppo;
  double t = a;
  while (t < b) {
    double len = factor * zero_spacing(t);
    len = std::min(len, factor * zero_spacing(t + len));
    double next = t + len;
    // avoid a sliver panel at the end
    if (next >= b || b - next < 0.25 * len) next = b;
    edges.push_back(next);
    t = next;
  }
  return edges;
}

void validate(const QuadratureSpec& spec) {
  if (!std::isfinite(spec.a) || !std::isfinite(spec.b)) throw DomainError("quadrature: non-finite range");
  if (spec.a > spec.b) throw RangeError("quadrature: a must not exceed b");
  if (spec.points_per_oscillation < 8) throw RangeError("quadrature: points_per_oscillation must be at least 8");
  if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0)) throw RangeError("quadrature: tolerances must be positive");
  if (spec.max_refinements < 1) throw RangeError("quadrature: max_refinements must be at least 1");
}

struct LevelResult {
  double value = 0.0;
  std::int64_t evaluations = 0;
};

LevelResult integrate_level(const std::function<double(double)>& f, const std::vector<double>& edges, int split,
                            const QuadratureSpec& spec) {
  const std::size_t panels = edges.size() - 1;
  const std::size_t pieces = panels * static_cast<std::size_t>(split);
  std::vector<double> values(pieces, 0.0);
  std::vector<std::int64_t> counts(pieces, 0);
  const double total = spec.b - spec.a;
  const double tol = std::max(spec.abs_tol, 1e-15);

  constexpr std::size_t kChunk = 64;
  const std::size_t chunks = (pieces + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(pieces, (c + 1) * kChunk);
    for (std::size_t k = c * kChunk; k < end; ++k) {
      const std::size_t p = k / split;
      const std::size_t j = k % split;
      const double lo0 = edges[p];
      const double h = (edges[p + 1] - lo0) / split;
      const double lo = lo0 + h * j;
      const double hi = j + 1 == static_cast<std::size_t>(split) ? edges[p + 1] : lo0 + h * (j + 1);
      if (spec.panel_rule == PanelRule::GaussLegendre16) {
        values[k] = gauss_panel(f, lo, hi);
        counts[k] = 16;
      } else {
        const auto [v, n] = simpson_panel(f, lo, hi, 0.1 * tol * (hi - lo) / total);
        values[k] = v;
        counts[k] = n;
      }
    }
  });
  LevelResult r;
  r.value = pairwise_sum<double>(values);
  for (auto n : counts) r.evaluations += n;
  return r;
}

bool has_head(MomentKind kind) { return kind != MomentKind::M3shift && kind != MomentKind::M3conj; }

void check_moment_args(MomentKind kind, double T, double U) {
  if (!std::isfinite(T) || !std::isfinite(U)) throw DomainError("integrate_moment: non-finite argument");
  if (T < 100.0 || T > 1e5) throw RangeError("integrate_moment: T must lie in [100, 1e5]");
  if (U < 0.0 || U > std::sqrt(T)) throw RangeError("integrate_moment: U must lie in [0, sqrt(T)]");
  (void)kind;
}

using HeadKey = std::tuple<int, double, int, int, double, double>;

MomentResult cached_head(MomentKind kind, double U, const QuadratureSpec& spec) {
  static std::mutex mutex;
  static std::map<HeadKey, MomentResult> cache;
  const HeadKey key{static_cast<int>(kind), U, spec.points_per_oscillation, static_cast<int>(spec.panel_rule),
                    spec.abs_tol, spec.rel_tol};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  QuadratureSpec head = spec;
  head.a = 0.0;
  head.b = kHeadEnd;
  const auto f = [kind, U](double t) { return moment_integrand(kind, t, U, true); };
  const IntegralEstimate est = integrate_oscillatory(f, head);
  MomentResult r;
  r.kind = kind;
  r.U = U;
  r.T = kHeadEnd;
  r.a = 0.0;
  r.b = kHeadEnd;
  r.value = est.value;
  r.est_error = est.est_error;
  r.evaluations = est.evaluations;
  r.converged = est.converged;
  std::lock_guard lock(mutex);
  cache.emplace(key, r);
  return r;
}

double moment_diagnostic(MomentKind kind, double T, double value) {
  const double lt = std::log(T);
  switch (kind) {
    case MomentKind::M1:
      return value / std::pow(T, 0.25);
    case MomentKind::M2shift:
      return value / (T * lt);
    case MomentKind::M3shift:
    case MomentKind::M3conj:
      return value / std::pow(T, 0.75);
    case MomentKind::M4:
      return value / (T * std::pow(lt, 4) / (2.0 * pi * pi));
    case MomentKind::Abs3:
      return value / (T * std::pow(lt, 2.25));
  }
  return 0.0;
}

}  // namespace

std::string to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::M1:
      return "m1";
    case MomentKind::M2shift:
      return "m2shift";
    case MomentKind::M3shift:
      return "m3shift";
    case MomentKind::M3conj:
      return "m3conj";
    case MomentKind::M4:
      return "m4";
    case MomentKind::Abs3:
      return "abs3";
  }
  return "unknown";
}

MomentKind parse_moment_kind(const std::string& name) {
  for (auto k : {MomentKind::M1, MomentKind::M2shift, MomentKind::M3shift, MomentKind::M3conj, MomentKind::M4,
                 MomentKind::Abs3}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown moment kind '" + name + "'");
}

double zero_spacing(double t) {
  const double x = std::abs(t) / (2.0 * pi);
  if (x <= std::numbers::e) return 2.0 * pi;
  return 2.0 * pi / std::log(x);
}

double moment_integrand(MomentKind kind, double t, double U, bool oracle) {
  const auto z = [oracle](double x) { return oracle ? hardy_z(x, ZMethod::Oracle).z : hardy_z_value(x); };
  switch (kind) {
    case MomentKind::M1:
      return z(t);
    case MomentKind::M2shift:
      return z(t) * z(t + U);
    case MomentKind::M3shift: {
      const double a = z(t);
      return a * a * z(t + U);
    }
    case MomentKind::M3conj: {
      const double b = z(t + U);
      return b * b * z(t);
    }
    case MomentKind::M4: {
      const double a = z(t);
      return (a * a) * (a * a);
    }
    case MomentKind::Abs3: {
      const double a = std::abs(z(t));
      return a * a * a;
    }
  }
  throw DomainError("moment_integrand: invalid kind");
}

IntegralEstimate integrate_oscillatory(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  validate(spec);
  IntegralEstimate out;
  if (spec.a == spec.b) return out;
  const auto edges = panel_edges(spec.a, spec.b, spec.points_per_oscillation);
  LevelResult coarse = integrate_level(f, edges, 1, spec);
  out.evaluations = coarse.evaluations;
  int split = 1;
  for (int level = 1; level <= spec.max_refinements; ++level) {
    split *= 2;
    const LevelResult fine = integrate_level(f, edges, split, spec);
    out.evaluations += fine.evaluations;
    out.value = fine.value;
    out.est_error = std::abs(fine.value - coarse.value);
    out.levels = level + 1;
    if (out.est_error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(fine.value))) {
      out.converged = true;
      return out;
    }
    coarse = fine;
  }
  out.converged = false;
  if (spec.strict) {
    throw ConvergenceError("quadrature: tolerance not met on [" + std::to_string(spec.a) + ", " +
                           std::to_string(spec.b) + "], last difference " + std::to_string(out.est_error));
  }
  return out;
}

MomentResult integrate_range(MomentKind kind, double U, const QuadratureSpec& spec) {
  if (!std::isfinite(U)) throw DomainError("integrate_range: non-finite U");
  const auto f = [kind, U](double t) { return moment_integrand(kind, t, U, false); };
  const IntegralEstimate est = integrate_oscillatory(f, spec);
  MomentResult r;
  r.kind = kind;
  r.U = U;
  r.T = spec.b;
  r.a = spec.a;
  r.b = spec.b;
  r.value = est.value;
  r.est_error = est.est_error;
  r.evaluations = est.evaluations;
  r.converged = est.converged;
  return r;
}

MomentResult integrate_moment(MomentKind kind, double T, double U, const QuadratureSpec& spec) {
  check_moment_args(kind, T, U);
  QuadratureSpec body = spec;
  MomentResult r;
  if (has_head(kind)) {
    const MomentResult head = cached_head(kind, U, spec);
    body.a = kHeadEnd;
    body.b = T;
    r = integrate_range(kind, U, body);
    r.value += head.value;
    r.est_error += head.est_error;
    r.evaluations += head.evaluations;
    r.converged = r.converged && head.converged;
    r.a = 0.0;
  } else {
    body.a = T / 2.0;
    body.b = T;
    r = integrate_range(kind, U, body);
  }
  r.T = T;
  r.diagnostic = moment_diagnostic(kind, T, r.value);
  return r;
}

MomentResult first_moment_diag(double T, const QuadratureSpec& spec) {
  return integrate_moment(MomentKind::M1, T, 0.0, spec);
}

std::vector<ProfilePoint> cumulative_moment(MomentKind kind, double U, const std::vector<double>& checkpoints,
                                            const QuadratureSpec& spec) {
  if (!has_head(kind)) throw DomainError("cumulative_moment: kind has no fixed starting point");
  std::vector<ProfilePoint> out;
  if (checkpoints.empty()) return out;
  if (checkpoints.front() < kHeadEnd) throw RangeError("cumulative_moment: checkpoints must be at least 100");
  const MomentResult head = cached_head(kind, U, spec);
  double value = head.value;
  double err = head.est_error;
  double prev = kHeadEnd;
  for (double c : checkpoints) {
    if (c < prev) throw RangeError("cumulative_moment: checkpoints must be increasing");
    QuadratureSpec seg = spec;
    seg.a = prev;
    seg.b = c;
    const MomentResult piece = integrate_range(kind, U, seg);
    value += piece.value;
    err += piece.est_error;
    out.push_back({c, value, err});
    prev = c;
  }
  return out;
}

double simpson_fixed(const std::function<double(double)>& f, double a, double b, std::int64_t n) {
  if (n < 2) n = 2;
  if (n % 2 == 1) ++n;
  const double h = (b - a) / static_cast<double>(n);
  std::vector<double> terms(static_cast<std::size_t>(n) + 1);
  const auto chunks = make_chunks(0, n + 1, 4096);
  parallel_for(chunks.size(), [&](std::size_t c) {
    for (long long i = chunks[c].begin; i < chunks[c].end; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      const double x = i == n ? b : a + h * static_cast<double>(i);
      terms[static_cast<std::size_t>(i)] = w * f(x);
    }
  });
  return pairwise_sum<double>(terms) * h / 3.0;
}

}  // namespace hardy
