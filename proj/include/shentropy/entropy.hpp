#pragma once

// Level energies of a coefficient pyramid, the level distribution P_h(l),
// the spherical-harmonics entropy SHE(J) and order selection from it.
//
//   E_h(l,m) = |S_{l,m}|^2            (summed over channels)
//   E_h(l)   = (1/N_l) sum_{|m|<=l} E_h(l,m)
//   P_h(l)   = E_h(l) / sum_l E_h(l)
//   SHE(J)   = -sum_{l<=J} P_h(l) log P_h(l)
//
// N_l defaults to 1 (it cancels in P_h). By default each SHE(J) normalizes
// P_h over levels 0..J only, so every value is the entropy of a genuine
// distribution; the full-band normalization is available for comparison.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "transform.hpp"

namespace shent {

enum class LogBase { E, Two, Ten };

inline double log_base_value(LogBase b) {
  switch (b) {
    case LogBase::E: return std::numbers::e;
    case LogBase::Two: return 2.0;
    case LogBase::Ten: return 10.0;
  }
  return std::numbers::e;
}

inline std::string to_string(LogBase b) {
  switch (b) {
    case LogBase::E: return "e";
    case LogBase::Two: return "2";
    case LogBase::Ten: return "10";
  }
  return "e";
}

inline LogBase log_base_from_string(const std::string& s) {
  if (s == "e" || s == "nat" || s == "natural") return LogBase::E;
  if (s == "2") return LogBase::Two;
  if (s == "10") return LogBase::Ten;
  throw DomainError("unknown log base '" + s + "' (expected e|2|10)");
}

enum class LevelNormalization { Unit, PerLevel };  // N_l = 1 or N_l = 2l+1
enum class SheNormalization { Prefix, Full };

struct EntropyOptions {
  LogBase log_base = LogBase::E;
  LevelNormalization level_normalization = LevelNormalization::Unit;
  SheNormalization normalization = SheNormalization::Prefix;
};

inline double detail_energy(const CoefficientPyramid& pyr, int l, int m) {
  double e = 0.0;
  for (int c = 0; c < pyr.channels(); ++c) e += std::norm(pyr(l, m, c));
  return e;
}

// E_h(l) for l = 0..L (no degeneracy check).
inline std::vector<double> level_energies(const CoefficientPyramid& pyr,
                                          LevelNormalization norm = LevelNormalization::Unit) {
  std::vector<double> e(static_cast<std::size_t>(pyr.band_limit()) + 1, 0.0);
  for (int l = 0; l <= pyr.band_limit(); ++l) {
    double s = 0.0;
    for (int m = -l; m <= l; ++m) s += detail_energy(pyr, l, m);
    e[static_cast<std::size_t>(l)] = norm == LevelNormalization::PerLevel ? s / (2 * l + 1) : s;
  }
  return e;
}

struct LevelSpectrum {
  std::vector<double> detail;       // E_h(l,m), canonical order
  std::vector<double> level;        // E_h(l)
  std::vector<double> normalizer;   // N_l
  std::vector<double> probability;  // P_h(l)
  double total = 0.0;               // E_h
};

inline LevelSpectrum level_spectrum(const CoefficientPyramid& pyr, const EntropyOptions& opts = {}) {
  LevelSpectrum s;
  const int L = pyr.band_limit();
  s.detail.resize(pyr.per_channel());
  for (int l = 0; l <= L; ++l)
    for (int m = -l; m <= l; ++m) s.detail[lm_index(l, m)] = detail_energy(pyr, l, m);
  s.level = level_energies(pyr, opts.level_normalization);
  for (int l = 0; l <= L; ++l)
    s.normalizer.push_back(opts.level_normalization == LevelNormalization::PerLevel ? 2.0 * l + 1.0 : 1.0);
  for (double e : s.level) s.total += e;
  if (!(s.total > 0.0)) throw DegenerateInputError("level_spectrum: pyramid carries no energy");
  for (double e : s.level) s.probability.push_back(e / s.total);
  return s;
}

namespace detail {

inline double shannon(const std::vector<double>& energies, int upto, double denominator, LogBase base) {
  double h = 0.0;
  for (int l = 0; l <= upto; ++l) {
    const double p = energies[static_cast<std::size_t>(l)] / denominator;
    if (p > 0.0) h -= p * std::log(p);
  }
  if (base == LogBase::E) return h;
  return h / std::log(log_base_value(base));
}

}  // namespace detail

inline double she(const CoefficientPyramid& pyr, int order, const EntropyOptions& opts = {}) {
  if (order < 0 || order > pyr.band_limit())
    throw OrderError("she: order " + std::to_string(order) + " outside [0, " + std::to_string(pyr.band_limit()) + "]");
  const auto e = level_energies(pyr, opts.level_normalization);
  double denom = 0.0;
  const int upto = opts.normalization == SheNormalization::Prefix ? order : pyr.band_limit();
  for (int l = 0; l <= upto; ++l) denom += e[static_cast<std::size_t>(l)];
  double prefix = 0.0;
  for (int l = 0; l <= order; ++l) prefix += e[static_cast<std::size_t>(l)];
  if (!(prefix > 0.0)) throw DegenerateInputError("she: levels 0.." + std::to_string(order) + " carry no energy");
  return detail::shannon(e, order, denom, opts.log_base);
}

struct SheCurve {
  std::vector<double> values;                      // SHE(J), J = 0..L
  std::vector<bool> degenerate;                    // prefix 0..J had no energy
  std::vector<double> cumulative_energy_fraction;  // E_{h,J} / E_h
  LogBase log_base = LogBase::E;
};

inline SheCurve she_curve(const CoefficientPyramid& pyr, const EntropyOptions& opts = {}) {
  SheCurve c;
  c.log_base = opts.log_base;
  const auto e = level_energies(pyr, opts.level_normalization);
  double total = 0.0;
  for (double v : e) total += v;
  double prefix = 0.0;
  for (int J = 0; J <= pyr.band_limit(); ++J) {
    prefix += e[static_cast<std::size_t>(J)];
    c.cumulative_energy_fraction.push_back(total > 0.0 ? prefix / total : 0.0);
    const double denom = opts.normalization == SheNormalization::Prefix ? prefix : total;
    if (!(prefix > 0.0)) {
      c.values.push_back(0.0);
      c.degenerate.push_back(true);
    } else {
      c.values.push_back(detail::shannon(e, J, denom, opts.log_base));
      c.degenerate.push_back(false);
    }
  }
  return c;
}

enum class SelectionCriterion { Stabilization, Flowchart };

inline std::string to_string(SelectionCriterion c) {
  return c == SelectionCriterion::Stabilization ? "stabilization" : "flowchart";
}

inline SelectionCriterion selection_criterion_from_string(const std::string& s) {
  if (s == "stabilization") return SelectionCriterion::Stabilization;
  if (s == "flowchart") return SelectionCriterion::Flowchart;
  throw DomainError("unknown criterion '" + s + "' (expected stabilization|flowchart)");
}

struct SelectionOptions {
  double epsilon = 1e-6;
  int window = 2;
  SelectionCriterion criterion = SelectionCriterion::Stabilization;
};

struct SelectionTraceRow {
  int order = 0;
  double she = 0.0;
  double delta = 0.0;  // SHE(J) - SHE(J-1), 0 at J = 0
  bool degenerate = false;
  std::string decision;
};

struct OrderSelectionReport {
  int selected_order = -1;
  SelectionCriterion criterion = SelectionCriterion::Stabilization;
  double epsilon = 0.0;
  int window = 0;
  int band_limit = 0;
  LogBase log_base = LogBase::E;
  std::vector<SelectionTraceRow> trace;
};

// Stabilization (default): the smallest J* at or after the first SHE value
// above epsilon such that |SHE(J) - SHE(J-1)| < epsilon for every J in
// (J*, J* + window]. A curve that never exceeds epsilon (a single occupied
// level) is stable from its first non-degenerate order.
//
// Flowchart: the first l with SHE(l) > epsilon gives order l + 2.
inline OrderSelectionReport select_order(const CoefficientPyramid& pyr, const SelectionOptions& sel = {},
                                         const EntropyOptions& opts = {}) {
  if (!(sel.epsilon > 0.0)) throw DomainError("select_order: epsilon must be positive");
  if (sel.window < 1) throw DomainError("select_order: window must be >= 1");
  const auto curve = she_curve(pyr, opts);
  const int L = pyr.band_limit();
  if (curve.degenerate.back()) throw DegenerateInputError("select_order: pyramid carries no energy");

  OrderSelectionReport rep;
  rep.criterion = sel.criterion;
  rep.epsilon = sel.epsilon;
  rep.window = sel.window;
  rep.band_limit = L;
  rep.log_base = opts.log_base;
  for (int J = 0; J <= L; ++J) {
    SelectionTraceRow row;
    row.order = J;
    row.she = curve.values[static_cast<std::size_t>(J)];
    row.delta = J > 0 ? row.she - curve.values[static_cast<std::size_t>(J - 1)] : 0.0;
    row.degenerate = curve.degenerate[static_cast<std::size_t>(J)];
    row.decision = row.degenerate ? "degenerate" : (J > 0 && std::abs(row.delta) >= sel.epsilon ? "jump" : "flat");
    rep.trace.push_back(row);
  }

  int first_nonzero = -1;
  for (int J = 0; J <= L; ++J)
    if (curve.values[static_cast<std::size_t>(J)] > sel.epsilon) {
      first_nonzero = J;
      break;
    }

  if (sel.criterion == SelectionCriterion::Flowchart) {
    if (first_nonzero < 0)
      throw NoConvergenceError("select_order: SHE never becomes nonzero up to L = " + std::to_string(L));
    if (first_nonzero + 2 > L)
      throw NoConvergenceError("select_order: first nonzero SHE at " + std::to_string(first_nonzero) +
                               " implies order " + std::to_string(first_nonzero + 2) + " > L = " +
                               std::to_string(L));
    rep.selected_order = first_nonzero + 2;
    rep.trace[static_cast<std::size_t>(first_nonzero)].decision += ",first-nonzero";
  } else if (first_nonzero < 0) {
    for (int J = 0; J <= L; ++J)
      if (!curve.degenerate[static_cast<std::size_t>(J)]) {
        rep.selected_order = J;
        break;
      }
  } else {
    for (int J = first_nonzero; J + sel.window <= L; ++J) {
      bool stable = true;
      for (int k = J + 1; k <= J + sel.window && stable; ++k)
        stable = std::abs(curve.values[static_cast<std::size_t>(k)] - curve.values[static_cast<std::size_t>(k - 1)]) <
                 sel.epsilon;
      if (stable) {
        rep.selected_order = J;
        break;
      }
    }
    if (rep.selected_order < 0)
      throw NoConvergenceError("select_order: SHE did not stabilize for " + std::to_string(sel.window) +
                               " consecutive orders within L = " + std::to_string(L));
  }
  rep.trace[static_cast<std::size_t>(rep.selected_order)].decision += ",selected";
  return rep;
}

}  // namespace shent
