#pragma once

// JSON serialization of reports and certificates. All documents carry the
// schema tag "qlat-report/1" and are rendered with a fixed key order and
// integer-only numbers, so parsing a rendered document and dumping it
// again reproduces the bytes exactly. Timing data lives in a separate
// top-level "timings" object outside the canonical payload.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlat/counterexample.hpp"
#include "qlat/diagnose.hpp"
#include "qlat/factor.hpp"
#include "qlat/qlattice.hpp"

namespace qlat {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "qlat-report/1";

// ---------------------------------------------------------------------------
// Small pieces.

inline ordered_json place_json(const Place& v) {
    ordered_json j;
    j["place"] = v.to_string();
    j["degree"] = v.degree();
    return j;
}

inline ordered_json search_outcome_json(const SearchOutcome& s) {
    ordered_json j;
    j["found"] = s.found;
    if (s.found) {
        ordered_json w = ordered_json::array();
        for (const Poly& e : s.witness) w.push_back(e.to_string());
        j["witness"] = w;
    }
    j["states"] = s.states;
    j["budgetExhausted"] = s.budget_exhausted;
    j["levelsCompleted"] = s.levels_completed;
    return j;
}

inline ordered_json criterion_json(const CriterionReport& c) {
    ordered_json j;
    j["name"] = to_string(c.which);
    j["satisfied"] = c.satisfied;
    ordered_json pre = ordered_json::array();
    for (const auto& [name, ok] : c.prereqs) {
        ordered_json e;
        e["check"] = name;
        e["holds"] = ok;
        pre.push_back(e);
    }
    j["prereqs"] = pre;
    j["assumptions"] = c.assumptions;
    j["narrative"] = c.narrative;
    return j;
}

inline ordered_json sa_status_json(const SAStatus& s) {
    ordered_json j;
    j["value"] = to_string(s.verdict);
    j["provenance"] = s.provenance;
    return j;
}

// ---------------------------------------------------------------------------
// Hasse diagnosis report.

inline ordered_json hasse_report_json(const HasseReport& r) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "hasse-diagnosis";
    ordered_json problem;
    problem["target"] = r.target;
    problem["object"] = r.object;
    problem["dimL"] = r.dim_L;
    problem["dimM"] = r.dim_M;
    j["problem"] = problem;
    j["globalRep"] = r.global_field_rep;
    ordered_json locals = ordered_json::array();
    for (const LocalRepRecord& lr : r.local_reps) {
        ordered_json e;
        e["place"] = lr.place.to_string();
        e["degree"] = lr.degree;
        e["result"] = lr.represented;
        e["method"] = lr.method;
        locals.push_back(e);
    }
    j["localReps"] = locals;
    j["checkedPlaceBound"] = r.checked_place_bound;
    ordered_json crit;
    crit["classNumber"] = criterion_json(r.class_number);
    crit["integralPoint"] = criterion_json(r.integral_point);
    crit["variant"] = criterion_json(r.variant);
    crit["selected"] = to_string(r.criterion);
    j["criteria"] = crit;
    j["saStatus"] = sa_status_json(r.sa);
    if (r.integral_rep) {
        ordered_json w = ordered_json::array();
        for (const RatFunc& e : *r.integral_rep) w.push_back(e.to_string());
        j["witness"] = w;
    } else if (r.integral_rep_matrix) {
        ordered_json m = ordered_json::array();
        for (std::size_t i = 0; i < r.integral_rep_matrix->rows(); ++i) {
            ordered_json row = ordered_json::array();
            for (std::size_t c = 0; c < r.integral_rep_matrix->cols(); ++c)
                row.push_back(r.integral_rep_matrix->at(i, c).to_string());
            m.push_back(row);
        }
        j["witness"] = m;
    } else {
        j["witness"] = nullptr;
    }
    j["search"] = search_outcome_json(r.search);
    j["conclusion"] = to_string(r.conclusion);
    if (!r.certificate_provenance.empty())
        j["certificateProvenance"] = r.certificate_provenance;
    ordered_json b;
    b["placeDegree"] = r.bounds.place_degree;
    b["searchDegree"] = r.bounds.search_degree;
    b["precision"] = r.bounds.precision;
    j["bounds"] = b;
    return j;
}

// ---------------------------------------------------------------------------
// Counterexample certificate.

inline ordered_json certificate_json(const Certificate& c) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "counterexample-certificate";
    ordered_json cfg;
    cfg["p"] = c.config.p;
    cfg["t"] = c.config.t.value();
    cfg["g"] = c.config.g.to_string();
    ordered_json diag = ordered_json::array();
    for (const Poly& e : c.config.diagonal()) diag.push_back(e.to_string());
    cfg["diagonal"] = diag;
    j["config"] = cfg;

    ordered_json sym;
    sym["passed"] = c.symbolic.passed;
    sym["detail"] = c.symbolic.detail;
    j["symbolic"] = sym;

    ordered_json ex;
    ex["degreeBound"] = c.exhaustive.degree_bound;
    ex["tuplesScanned"] = c.exhaustive.tuples_scanned;
    ex["degreeIdentityViolations"] = c.exhaustive.degree_identity_violations;
    ex["xHits"] = c.exhaustive.x_hits;
    ex["jobs"] = c.exhaustive.jobs;
    j["exhaustive"] = ex;

    j["xSearch"] = search_outcome_json(c.x_search);
    j["globalXRepresentable"] = c.global_x_representable;

    ordered_json lu;
    lu["placeDegreeBound"] = c.local_universality.place_degree_bound;
    lu["allUniversal"] = c.local_universality.all_universal;
    ordered_json pl = ordered_json::array();
    for (const PlaceUniversality& pu : c.local_universality.places) {
        ordered_json e;
        e["place"] = pu.place.to_string();
        e["degree"] = pu.place.degree();
        e["universal"] = pu.universal;
        e["method"] = pu.method;
        pl.push_back(e);
    }
    lu["places"] = pl;
    j["localUniversality"] = lu;

    ordered_json samples = ordered_json::array();
    for (const UniversalitySample& s : c.universality_samples) {
        ordered_json e;
        e["target"] = s.target.to_string();
        e["represented"] = s.represented;
        e["witnessFound"] = s.witness_found;
        if (s.witness_found) {
            ordered_json w = ordered_json::array();
            for (const RatFunc& x : s.witness) w.push_back(x.to_string());
            e["witness"] = w;
        }
        samples.push_back(e);
    }
    j["universalitySamples"] = samples;

    j["definite"] = c.definite;
    j["cliffordLabel"] = c.clifford_label;
    j["saConclusion"] = to_string(c.sa_conclusion);
    j["certified"] = c.certified;
    j["withheldReason"] = c.withheld_reason;
    ordered_json b;
    b["alphaDegreeBound"] = c.bounds.resolved_alpha_bound(c.config.p);
    b["placeDegreeBound"] = c.bounds.place_degree_bound;
    b["universalitySamples"] = c.bounds.universality_samples;
    b["witnessSearchDegree"] = c.bounds.witness_search_degree;
    j["bounds"] = b;
    return j;
}

// ---------------------------------------------------------------------------
// Algebra utility reports.

inline ordered_json factorization_json(std::uint64_t p, const Poly& input,
                                       const Factorization& f) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "factorization";
    j["p"] = p;
    j["input"] = input.to_string();
    j["unit"] = f.unit.value();
    ordered_json fac = ordered_json::array();
    for (const auto& [prime, mult] : f.factors) {
        ordered_json e;
        e["prime"] = prime.to_string();
        e["multiplicity"] = mult;
        fac.push_back(e);
    }
    j["factors"] = fac;
    return j;
}

inline ordered_json places_json(std::uint64_t p, int bound, const std::vector<Place>& places) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "places";
    j["p"] = p;
    j["bound"] = bound;
    ordered_json arr = ordered_json::array();
    for (const Place& v : places) arr.push_back(place_json(v));
    j["places"] = arr;
    j["count"] = places.size();
    return j;
}

inline ordered_json hilbert_json(std::uint64_t p, const RatFunc& a, const RatFunc& b,
                                 const Place& v, int symbol) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "hilbert-symbol";
    j["p"] = p;
    j["a"] = a.to_string();
    j["b"] = b.to_string();
    j["place"] = v.to_string();
    j["symbol"] = symbol;
    return j;
}

inline ordered_json genus_symbol_json(const QLattice& L) {
    GenusSymbol g = L.genus_symbol();
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "genus-symbol";
    j["p"] = L.characteristic();
    ordered_json diag = ordered_json::array();
    for (std::size_t i = 0; i < L.gram().rows(); ++i)
        diag.push_back(L.gram().at(i, i).to_string());
    j["diagonal"] = diag;
    j["rank"] = g.rank;
    j["detClass"] = g.det_class.to_string();
    ordered_json at = ordered_json::array();
    for (const auto& [v, comps] : g.local_symbols) {
        ordered_json e;
        e["place"] = v.to_string();
        ordered_json cs = ordered_json::array();
        ordered_json scales = ordered_json::array();
        for (const JordanComponent& c : comps) {
            ordered_json ce;
            ce["scale"] = c.scale;
            ce["rank"] = c.rank;
            ce["unitDetClass"] = c.unit_det_nonsquare ? "u" : "1";
            cs.push_back(ce);
            for (int k = 0; k < c.rank; ++k) scales.push_back(c.scale);
        }
        e["components"] = cs;
        e["scales"] = scales;
        at.push_back(e);
    }
    j["localSymbols"] = at;
    return j;
}

inline ordered_json class_bound_json(const QLattice& L, const ClassNumberReport& r) {
    ordered_json j;
    j["schema"] = kReportSchema;
    j["kind"] = "class-number-bound";
    j["p"] = L.characteristic();
    ordered_json diag = ordered_json::array();
    for (std::size_t i = 0; i < L.gram().rows(); ++i)
        diag.push_back(L.gram().at(i, i).to_string());
    j["diagonal"] = diag;
    j["rank"] = r.rank;
    j["spinorGeneraBound"] = r.spinor_genera_bound;
    ordered_json fp = ordered_json::array();
    for (const Place& v : r.failing_places) fp.push_back(v.to_string());
    j["failingPlaces"] = fp;
    j["saStatus"] = sa_status_json(r.sa);
    if (r.class_number) j["classNumber"] = *r.class_number;
    else j["classNumber"] = nullptr;
    j["narrative"] = r.narrative;
    return j;
}

// ---------------------------------------------------------------------------
// Canonical rendering: fixed indentation, trailing newline. Parsing a
// canonical string and rendering again is byte-identical.

inline std::string canonical_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

inline ordered_json parse_report(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    if (!j.contains("schema") || j["schema"] != kReportSchema)
        throw std::invalid_argument("not a qlat-report/1 document");
    return j;
}

inline void write_report_file(const std::string& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << canonical_dump(j);
}

}  // namespace qlat
