#include "hardy/explicit_formula.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "hardy/errors.hpp"
#include "hardy/parallel.hpp"
#include "hardy/saddle.hpp"
#include "hardy/summation.hpp"

namespace hardy {

std::string to_string(FormulaVariant v) { return v == FormulaVariant::Exact317 ? "exact" : "thm1"; }

FormulaVariant parse_formula_variant(const std::string& name) {
  if (name == "exact" || name == "exact317") return FormulaVariant::Exact317;
  if (name == "thm1" || name == "theorem1") return FormulaVariant::Theorem1;
  throw DomainError("unknown formula variant '" + name + "'");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ComplexValue rhs_sum(double T, double U, const DivisorTable& table, const RhsOptions& options) {
  const SummationRange range = summation_range(T, U);
  if (range.n_hi > table.bound()) {
    throw RangeError("rhs_sum: divisor table bound " + std::to_string(table.bound()) + " below floor(T0) = " +
                     std::to_string(range.n_hi));
  }
  if (range.count() == 0) return {};
  const double shift = options.conjugate ? -U : U;
  const auto chunks = make_chunks(range.n_lo, range.n_hi + 1, 2048);
  std::vector<CompensatedComplexSum> partial(chunks.size());
  parallel_for(chunks.size(), [&](std::size_t c) {
    CompensatedComplexSum acc;
    const auto add = [&](long long n) {
      const FormulaTerm term = detail::formula_term_signed(n, shift, table);
      acc.add(options.variant == FormulaVariant::Exact317 ? term.exact_term : term.thm1_term);
    };
    if (options.reverse) {
      for (long long n = chunks[c].end - 1; n >= chunks[c].begin; --n) add(n);
    } else {
      for (long long n = chunks[c].begin; n < chunks[c].end; ++n) add(n);
    }
    partial[c] = acc;
  });
  CompensatedComplexSum total;
  if (options.reverse) {
    for (auto it = partial.rbegin(); it != partial.rend(); ++it) total.merge(*it);
  } else {
    for (const auto& p : partial) total.merge(p);
  }
  return total.value();
}

MomentComparison compare_theorem1(double T, double U, const QuadratureSpec& spec, const DivisorTable& table,
                                  FormulaVariant variant, bool conjugate) {
  const MomentResult lhs = integrate_moment(conjugate ? MomentKind::M3conj : MomentKind::M3shift, T, U, spec);
  RhsOptions opts;
  opts.variant = variant;
  opts.conjugate = conjugate;
  MomentComparison c;
  c.T = T;
  c.U = U;
  c.lhs = lhs.value;
  c.lhs_est_error = lhs.est_error;
  c.rhs = rhs_sum(T, U, table, opts);
  c.abs_diff = std::abs(c.lhs - c.rhs.real());
  c.im_leak = std::abs(c.rhs.imag());
  c.normalized = c.abs_diff / std::pow(T, 0.75);
  c.n_terms = summation_range(T, U).count();
  c.evaluations = lhs.evaluations;
  c.variant = variant;
  c.conjugate = conjugate;
  return c;
}

std::string comparison_csv_header() { return "T,U,variant,lhs,rhs_re,rhs_im,abs_diff,normalized,n_terms,evaluations"; }

std::string comparison_csv_row(const MomentComparison& c) {
  std::string variant = to_string(c.variant);
  if (c.conjugate) variant += "_conj";
  return format_double(c.T) + "," + format_double(c.U) + "," + variant + "," + format_double(c.lhs) + "," +
         format_double(c.rhs.real()) + "," + format_double(c.rhs.imag()) + "," + format_double(c.abs_diff) + "," +
         format_double(c.normalized) + "," + std::to_string(c.n_terms) + "," + std::to_string(c.evaluations);
}

KFit fit_k_leading(double U, std::int64_t n_lo, std::int64_t n_hi, const DivisorTable& table) {
  if (n_lo < 1 || n_hi < n_lo) throw RangeError("fit_k_leading: empty n range");
  if (!(U > 0.0)) throw RangeError("fit_k_leading: U must be positive");
  CompensatedSum sxx;
  CompensatedComplexSum sxy;
  std::vector<std::pair<double, ComplexValue>> samples;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    const FormulaTerm term = formula_term(n, U, table);
    const double x = U * U / std::cbrt(static_cast<double>(n) * static_cast<double>(n));
    const ComplexValue y = term.k_factor - 1.0;
    sxx.add(x * x);
    sxy.add(x * y);
    samples.emplace_back(x, y);
  }
  KFit fit;
  fit.d2 = sxy.value() / sxx.value();
  fit.samples = static_cast<std::int64_t>(samples.size());
  for (const auto& [x, y] : samples) fit.max_residual = std::max(fit.max_residual, std::abs(y - fit.d2 * x));
  return fit;
}

}  // namespace hardy
