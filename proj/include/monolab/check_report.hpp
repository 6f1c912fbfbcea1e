#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monolab/params.hpp"

namespace monolab {

enum class Verdict { Pass, Fail, HypothesisNotMet };

std::string_view to_string(Verdict v);

struct Hypothesis {
  std::string name;
  bool satisfied;
  std::string detail;
};

struct Metric {
  std::string name;
  double value;
};

/// Outcome of one check. Identity checks fill max_residual (relative),
/// inequality checks fill min_margin (normalized slack); a check may carry
/// both.
struct CheckReport {
  std::string theorem_id;
  std::optional<Params> params;
  std::vector<Hypothesis> hypotheses;
  std::vector<double> grid;
  bool has_identity = false;
  bool has_inequality = false;
  double max_residual = 0.0;
  double min_margin = 0.0;
  double identity_tol = 1e-6;
  double inequality_tol = 1e-8;
  Verdict verdict = Verdict::Fail;
  std::vector<Metric> metrics;
  std::vector<std::string> notes;

  void add_hypothesis(std::string name, bool ok, std::string detail = {});
  void record_residual(double relative_residual);
  void record_margin(double normalized_margin);
  bool hypotheses_satisfied() const;
  /// Sets the verdict from hypotheses, residuals and margins.
  void finalize();
  const Metric* metric(std::string_view name) const;
};

/// Multi-line human-readable rendering.
std::string render(const CheckReport& report);

}  // namespace monolab
