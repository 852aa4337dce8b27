#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hardy {

enum class PanelRule { GaussLegendre16, AdaptiveSimpson };

struct QuadratureSpec {
  double a = 0.0;
  double b = 0.0;
  int points_per_oscillation = 12;
  PanelRule panel_rule = PanelRule::GaussLegendre16;
  double abs_tol = 1e-6;
  double rel_tol = 1e-9;
  /// Number of panel halvings tried before giving up.
  int max_refinements = 4;
  /// Throw ConvergenceError when the tolerance is missed; otherwise flag it in the result.
  bool strict = true;
};

/// Abs3 is |Z|^3, used only for the order-of-magnitude diagnostic.
enum class MomentKind { M1, M2shift, M3shift, M3conj, M4, Abs3 };

[[nodiscard]] std::string to_string(MomentKind kind);
/// Accepts m1, m2shift, m3shift, m3conj, m4, abs3. Throws DomainError otherwise.
[[nodiscard]] MomentKind parse_moment_kind(const std::string& name);

struct MomentResult {
  MomentKind kind = MomentKind::M1;
  double T = 0.0;
  double U = 0.0;
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double est_error = 0.0;
  std::int64_t evaluations = 0;
  bool converged = true;
  /// Kind-specific normalisation, e.g. value / T^(1/4) for the first moment.
  double diagnostic = 0.0;
};

/// Integrand of the given kind at t: Z(t), Z(t)Z(t+U), Z(t)^2 Z(t+U), Z(t+U)^2 Z(t), Z(t)^4, |Z(t)|^3.
[[nodiscard]] double moment_integrand(MomentKind kind, double t, double U, bool oracle = false);

/// Local zero spacing 2 pi / log(|t| / 2 pi), floored at 2 pi for small |t|.
[[nodiscard]] double zero_spacing(double t);

struct IntegralEstimate {
  double value = 0.0;
  double est_error = 0.0;
  std::int64_t evaluations = 0;
  int levels = 0;
  bool converged = true;
};

/// Integrates f over [spec.a, spec.b] on panels tied to the local zero spacing,
/// comparing successive halvings. f must be safe to call concurrently.
[[nodiscard]] IntegralEstimate integrate_oscillatory(const std::function<double(double)>& f, const QuadratureSpec& spec);

/// The integrand of `kind` over [spec.a, spec.b]. Riemann-Siegel for t >= 50, oracle below.
[[nodiscard]] MomentResult integrate_range(MomentKind kind, double U, const QuadratureSpec& spec);

/// Canonical moment integrals. M3shift and M3conj run over [T/2, T]; the other kinds
/// over [0, T], with [0, 100] integrated by the oracle once and cached.
/// spec.a and spec.b are ignored. Requires 100 <= T <= 1e5 and 0 <= U <= sqrt(T).
[[nodiscard]] MomentResult integrate_moment(MomentKind kind, double T, double U, const QuadratureSpec& spec = {});

/// Integral of Z over [0, T] with diagnostic = value / T^(1/4).
[[nodiscard]] MomentResult first_moment_diag(double T, const QuadratureSpec& spec = {});

struct ProfilePoint {
  double T = 0.0;
  double value = 0.0;
  double est_error = 0.0;
};

/// Running integral of `kind` from its canonical start (0 for M1/M2shift/M4/Abs3)
/// sampled at each checkpoint. Checkpoints must be increasing and >= 100.
[[nodiscard]] std::vector<ProfilePoint> cumulative_moment(MomentKind kind, double U, const std::vector<double>& checkpoints,
                                                          const QuadratureSpec& spec = {});

/// Fixed-step composite Simpson on [a, b] with n (rounded up to even) subintervals.
[[nodiscard]] double simpson_fixed(const std::function<double(double)>& f, double a, double b, std::int64_t n);

}  // namespace hardy
