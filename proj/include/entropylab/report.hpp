#pragma once

#include <concepts>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "entropylab/at.hpp"
#include "entropylab/props.hpp"

namespace entropylab {

// all floating point output goes through one formatter so reports are
// byte-stable across runs
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::string(buf);
}

// ---------------------------------------------------------------------------
// Ordered key/value tree rendered as indented "key: value" lines.  Insertion
// order is preserved, which is what makes report output deterministic.

class Doc {
 public:
  Doc& put(const std::string& key, std::string value) {
    nodes_.emplace_back(key, std::move(value));
    return *this;
  }
  Doc& put(const std::string& key, const char* value) {
    return put(key, std::string(value));
  }
  Doc& put(const std::string& key, double value) {
    return put(key, format_double(value));
  }
  Doc& put(const std::string& key, bool value) {
    return put(key, std::string(value ? "true" : "false"));
  }
  template <typename Int>
    requires std::integral<Int>
  Doc& put(const std::string& key, Int value) {
    return put(key, std::to_string(value));
  }

  // the reference is into this node's storage: finish filling a child before
  // adding further keys to the parent
  Doc& child(const std::string& key) {
    nodes_.emplace_back(key, Doc{});
    return std::get<Doc>(nodes_.back().second);
  }

  void write(std::ostream& os, int indent = 0) const {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    for (const auto& [key, payload] : nodes_) {
      if (std::holds_alternative<std::string>(payload)) {
        os << pad << key << ": " << std::get<std::string>(payload) << "\n";
      } else {
        os << pad << key << ":\n";
        std::get<Doc>(payload).write(os, indent + 1);
      }
    }
  }

 private:
  std::vector<std::pair<std::string, std::variant<std::string, Doc>>> nodes_;
};

// ---------------------------------------------------------------------------
// report builders

inline std::string exact_kind_name(ExactKind k) {
  switch (k) {
    case ExactKind::ZeroCertificate: return "zero_certificate";
    case ExactKind::ExactLinear: return "exact_linear";
    case ExactKind::None: return "none";
  }
  return "none";
}

inline void estimate_to_doc(Doc& doc, const EntropyEstimate& est) {
  doc.put("value", est.value());
  doc.put("upper_bound", est.upper_bound);
  doc.put("exact", exact_kind_name(est.exact.kind));
  if (est.exact.kind == ExactKind::ZeroCertificate)
    doc.put("certificate_m", est.exact.certificate_m);
  if (est.exact.kind == ExactKind::ExactLinear) {
    doc.put("growth_base", est.exact.growth_base);
    doc.put("growth_coeff", est.exact.growth_coeff);
  }
  doc.put("depth_reached", est.depth_reached);
  doc.put("budget_hit", est.budget_hit);
  doc.put("one_inserted", est.one_inserted);
  Doc& pts = doc.child("dyadic");
  for (const DyadicPoint& p : est.dyadic) {
    Doc& row = pts.child("k" + std::to_string(p.k));
    row.put("n", p.n);
    row.put("cardinality", p.cardinality);
    row.put("d", p.d);
  }
}

inline void evidence_to_doc(Doc& doc, const HEvidence& ev) {
  doc.put("value", ev.value);
  doc.put("all_exact", ev.all_exact);
  if (ev.all_exact) doc.put("growth_base", ev.growth_base);
  doc.put("budget_hit", ev.any_budget_hit);
  for (std::size_t i = 0; i < ev.estimates.size(); ++i)
    estimate_to_doc(doc.child(ev.labels[i]), ev.estimates[i]);
}

inline void at_report_to_doc(Doc& doc, const ATReport& rep) {
  doc.put("subgroup", rep.subgroup);
  doc.put("verdict", verdict_name(rep.verdict));
  if (!rep.exact_identity.empty()) doc.put("exact_identity", rep.exact_identity);
  doc.put("total_value", rep.total_value);
  doc.put("restricted_plus_quotient", rep.sum_value);
  evidence_to_doc(doc.child("total"), rep.total);
  evidence_to_doc(doc.child("restricted"), rep.restricted);
  evidence_to_doc(doc.child("quotient"), rep.quotient);
  Doc& wit = doc.child("witness");
  for (const WitnessRow& row : rep.witness) {
    Doc& r = wit.child("n" + std::to_string(row.n));
    r.put("total", row.total);
    r.put("restricted", row.restricted);
    r.put("cosets", row.cosets);
  }
  if (!rep.growth_entry.empty()) {
    doc.put("growth_entry", rep.growth_entry);
    Doc& gr = doc.child("growth_ratios");
    for (std::size_t i = 0; i < rep.growth_ratios.size(); ++i)
      gr.put("r" + std::to_string(i), rep.growth_ratios[i]);
  }
  Doc& notes = doc.child("notes");
  for (std::size_t i = 0; i < rep.notes.size(); ++i)
    notes.put("note" + std::to_string(i), rep.notes[i]);
}

inline void lemma_report_to_doc(Doc& doc, const LemmaSuiteReport& rep) {
  doc.put("all_passed", rep.all_passed());
  doc.put("total_passed", rep.total_passed);
  doc.put("total_failed", rep.total_failed);
  Doc& clauses = doc.child("clauses");
  for (const ClauseResult& c : rep.clauses) {
    Doc& row = clauses.child(c.name);
    row.put("passed", c.passed);
    row.put("failed", c.failed);
    if (!c.counterexample.empty()) row.put("counterexample", c.counterexample);
  }
}

inline void cen_report_to_doc(Doc& doc, const CenReport& rep) {
  doc.put("holds", rep.holds);
  Doc& rows = doc.child("rows");
  for (const CenRow& row : rep.rows) {
    Doc& r = rows.child("n" + std::to_string(row.n));
    r.put("card_e", row.card_e);
    r.put("card_b", row.card_b);
    r.put("card_eb", row.card_eb);
    r.put("classes_b_mod_te", row.classes_b_mod_te);
    r.put("cosets_b_mod_n", row.cosets_b_mod_n);
    r.put("te_subgroup", row.te_subgroup);
    r.put("product_exact", row.product_exact);
    r.put("count_exact", row.count_exact);
    r.put("bound_ok", row.bound_ok);
  }
}

inline void mettor_report_to_doc(Doc& doc, const MettorReport& rep) {
  doc.put("holds", rep.holds);
  doc.put("card_t", rep.card_t);
  doc.put("closure_card", rep.closure_card);
  doc.put("e_card", rep.e_card);
  doc.put("s_card", rep.s_card);
  doc.put("closure_decomposes", rep.closure_decomposes);
  doc.put("ell_t_derived", rep.ell_t_derived);
  doc.put("ell_t_s", rep.ell_t_s);
  doc.put("ell_match", rep.ell_match);
  Doc& rows = doc.child("sandwich");
  for (const MettorRow& row : rep.sandwich) {
    Doc& r = rows.child("k" + std::to_string(row.k));
    r.put("n", row.n);
    r.put("card_d", row.card_d);
    r.put("classes_mid", row.classes_mid);
    r.put("card_e", row.card_e);
    r.put("fallback", row.fallback);
    r.put("ok", row.sandwich_ok);
    r.put("mid_over_n", row.mid_over_n);
  }
  Doc& notes = doc.child("notes");
  for (std::size_t i = 0; i < rep.notes.size(); ++i)
    notes.put("note" + std::to_string(i), rep.notes[i]);
}

inline void zero_reduction_report_to_doc(Doc& doc, const ZeroReductionReport& rep) {
  doc.put("holds", rep.holds);
  doc.put("m", rep.m);
  doc.put("f_card", rep.f_card);
  doc.put("e2_card", rep.e2_card);
  doc.put("e2_in_h", rep.e2_in_h);
  Doc& inc = doc.child("inclusions");
  for (std::size_t k = 0; k < rep.inclusion_ok.size(); ++k)
    inc.put("k" + std::to_string(k + 1), static_cast<bool>(rep.inclusion_ok[k]));
  Doc& qt = doc.child("quotient_trace");
  for (std::size_t i = 0; i < rep.quotient_trace.size(); ++i)
    qt.put("n" + std::to_string(i + 1), rep.quotient_trace[i]);
  estimate_to_doc(doc.child("estimate_e"), rep.est_e);
  estimate_to_doc(doc.child("estimate_e2"), rep.est_e2);
}

// ---------------------------------------------------------------------------
// CSV writers

inline void write_trajectory_csv(std::ostream& os,
                                 const std::vector<std::uint64_t>& cards,
                                 const std::vector<std::uint64_t>* cosets = nullptr) {
  os << "n,cardinality";
  if (cosets) os << ",cosets_mod_H";
  os << "\n";
  for (std::size_t i = 0; i < cards.size(); ++i) {
    os << (i + 1) << "," << cards[i];
    if (cosets && i < cosets->size()) os << "," << (*cosets)[i];
    os << "\n";
  }
}

inline void write_entropy_csv(std::ostream& os, const EntropyEstimate& est) {
  os << "k,two_pow_k,cardinality,d_k,exact_flag\n";
  for (const DyadicPoint& p : est.dyadic)
    os << p.k << "," << p.n << "," << p.cardinality << "," << format_double(p.d)
       << "," << (est.exact.is_exact() ? 1 : 0) << "\n";
}

}  // namespace entropylab
