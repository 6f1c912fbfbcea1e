#include "monolab/check_report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace monolab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::HypothesisNotMet:
      return "hypothesis-not-met";
  }
  return "?";
}

void CheckReport::add_hypothesis(std::string name, bool ok, std::string detail) {
  hypotheses.push_back({std::move(name), ok, std::move(detail)});
}

void CheckReport::record_residual(double relative_residual) {
  if (!has_identity) {
    has_identity = true;
    max_residual = 0.0;
  }
  // NaN must never pass
  if (std::isnan(relative_residual))
    max_residual = std::numeric_limits<double>::infinity();
  else
    max_residual = std::max(max_residual, relative_residual);
}

void CheckReport::record_margin(double normalized_margin) {
  if (!has_inequality) {
    has_inequality = true;
    min_margin = std::numeric_limits<double>::infinity();
  }
  if (std::isnan(normalized_margin))
    min_margin = -std::numeric_limits<double>::infinity();
  else
    min_margin = std::min(min_margin, normalized_margin);
}

bool CheckReport::hypotheses_satisfied() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(),
                     [](const Hypothesis& h) { return h.satisfied; });
}

void CheckReport::finalize() {
  if (!hypotheses_satisfied()) {
    verdict = Verdict::HypothesisNotMet;
    return;
  }
  bool ok = has_identity || has_inequality;
  if (has_identity) ok = ok && max_residual <= identity_tol;
  if (has_inequality) ok = ok && min_margin >= -inequality_tol;
  verdict = ok ? Verdict::Pass : Verdict::Fail;
}

const Metric* CheckReport::metric(std::string_view name) const {
  for (const auto& m : metrics)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string render(const CheckReport& r) {
  std::string out;
  out += "check " + r.theorem_id + "\n";
  if (r.params) {
    const Params& p = *r.params;
    out += "  params: k=" + num(p.k) + " l=" + num(p.l) + " beta=" + num(p.beta) +
           " p=" + num(p.p) + " N=" + num(p.N) + " alpha=" + num(p.alpha) +
           " c=" + num(p.c) + " d=" + num(p.d) + "\n";
  }
  if (!r.grid.empty())
    out += "  grid: " + std::to_string(r.grid.size()) + " points in [" +
           num(r.grid.front()) + ", " + num(r.grid.back()) + "]\n";
  for (const auto& h : r.hypotheses) {
    out += std::string("  hypothesis ") + (h.satisfied ? "[ok]   " : "[FAIL] ") +
           h.name;
    if (!h.detail.empty()) out += " (" + h.detail + ")";
    out += "\n";
  }
  if (r.has_identity)
    out += "  max relative residual: " + num(r.max_residual) + " (tol " +
           num(r.identity_tol) + ")\n";
  if (r.has_inequality)
    out += "  min normalized margin: " + num(r.min_margin) + " (tol -" +
           num(r.inequality_tol) + ")\n";
  for (const auto& m : r.metrics) out += "  " + m.name + " = " + num(m.value) + "\n";
  for (const auto& n : r.notes) out += "  note: " + n + "\n";
  out += "  verdict: " + std::string(to_string(r.verdict)) + "\n";
  return out;
}

}  // namespace monolab
