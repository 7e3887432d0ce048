#ifndef EQUIMULT_REPORT_HPP
#define EQUIMULT_REPORT_HPP

#include <string>

#include "json.hpp"

#include "equimult/parse.hpp"
#include "equimult/verify.hpp"

namespace equimult {

using ordered_json = nlohmann::ordered_json;

inline ordered_json series_json(const MultiSeries& s) {
    ordered_json j;
    j["poly"] = to_poly_string(s);
    if (!s.precision().exact) j["truncated_at"] = s.precision().degree;
    return j;
}

inline ordered_json curve_json(const CurveIdeal& c) {
    ordered_json j;
    j["g"] = series_json(c.g);
    j["h"] = series_json(c.h);
    j["smooth"] = c.smooth;
    switch (c.canonical) {
        case CurveIdeal::Form::Transversal: j["canonical"] = "transversal"; break;
        case CurveIdeal::Form::Tangent: j["canonical"] = "tangent"; break;
        case CurveIdeal::Form::Divisor: j["canonical"] = "divisor"; break;
        default: break;
    }
    if (!c.smooth) {
        j["irreducibility"] =
            c.irred == CurveIdeal::Irred::Irreducible
                ? "certified"
                : (c.irred == CurveIdeal::Irred::Unverified ? "unverified" : "reducible");
    }
    return j;
}

inline ordered_json element_json(const LocusElement& e) {
    if (e.origin) return ordered_json{{"origin", true}};
    return ordered_json{{"curve", curve_json(*e.curve)}};
}

inline ordered_json newton_json(const Surface& s) {
    ordered_json arr = ordered_json::array();
    for (const auto& ev : newton_set(s))
        arr.push_back(ordered_json::array({ev.e[0], ev.e[1], ev.e[2]}));
    return arr;
}

inline ordered_json surface_json(const Surface& s) {
    ordered_json j;
    j["field"] = s.field.str();
    j["multiplicity"] = s.n;
    j["equation"] = series_json(s.F);
    ordered_json coeffs = ordered_json::array();
    for (const auto& a : s.a) coeffs.push_back(series_json(a));
    j["coefficients"] = coeffs;
    ordered_json cone;
    cone["plane"] = s.cone.plane;
    if (s.cone.plane) cone["linear_form"] = to_poly_string(s.cone.linear_form);
    j["tangent_cone"] = cone;
    j["newton_set"] = newton_json(s);
    ordered_json hist = ordered_json::array();
    for (const auto& h : s.history)
        hist.push_back(ordered_json{{"kind", h.kind}, {"detail", h.detail}});
    j["history"] = hist;
    return j;
}

inline ordered_json locus_json(const DiscoveredLocus& d) {
    ordered_json j;
    ordered_json els = ordered_json::array();
    for (const auto& e : d.elements) els.push_back(element_json(e));
    j["elements"] = els;
    j["bounds"] = ordered_json{{"h_degree", d.bounds.h_degree}, {"g_degree", d.bounds.g_degree}};
    j["completeness"] = d.heuristic_only
                            ? "heuristic_only"
                            : (d.smooth_exhaustive ? "exhaustive_within_bounds" : "partial");
    j["notes"] = d.notes;
    return j;
}

inline ordered_json record_json(const TransformRecord& r) {
    ordered_json j;
    j["kind"] = r.kind == TransformKind::Quadratic ? "quadratic" : "monoidal";
    j["direction"] = r.u.str();
    if (r.center) j["center"] = curve_json(*r.center);
    ordered_json hom = ordered_json::array();
    for (const auto& im : r.hom) hom.push_back(to_poly_string(im));
    j["homomorphism"] = hom;
    j["n_before"] = r.n_before;
    j["n_after"] = r.n_after;
    j["multiplicity_dropped"] = r.multiplicity_dropped;
    if (r.divisor) j["exceptional_divisor"] = curve_json(*r.divisor);
    j["renormalized"] = !r.post_is_identity;
    return j;
}

inline ordered_json theorem_report_json(const TheoremReport& r) {
    ordered_json j;
    j["case"] = r.theorem_case;
    j["surface"] = r.surface;
    j["field"] = r.field;
    if (!r.direction.empty()) j["direction"] = r.direction;
    if (!r.center.empty()) j["center"] = r.center;
    j["n_before"] = r.n_before;
    j["n_after"] = r.n_after;
    j["multiplicity_dropped"] = r.multiplicity_dropped;
    ordered_json before = ordered_json::array();
    for (const auto& e : r.locus_before) before.push_back(element_json(e));
    j["locus_before"] = before;
    ordered_json after = ordered_json::array();
    for (const auto& e : r.locus_after) after.push_back(element_json(e));
    j["locus_after"] = after;
    ordered_json cls = ordered_json::array();
    for (const auto& m : r.classification) {
        ordered_json e;
        e["kind"] = m.kind;
        e["after"] = element_json(m.after);
        if (m.preimage) e["preimage"] = element_json(*m.preimage);
        if (!m.notes.empty()) e["notes"] = m.notes;
        cls.push_back(e);
    }
    j["classification"] = cls;
    j["verdict"] = verdict_name(r.verdict);
    if (!r.branch.empty()) j["branch"] = r.branch;
    if (!r.witness.empty()) j["witness"] = r.witness;
    if (!r.reason.empty()) j["reason"] = r.reason;
    j["bounds"] = ordered_json{{"h_degree", r.bounds.h_degree}, {"g_degree", r.bounds.g_degree}};
    j["search_certified"] = r.search_certified;
    j["notes"] = r.notes;
    return j;
}

inline ordered_json make_document(const std::string& command, ordered_json config,
                                  ordered_json result) {
    ordered_json doc;
    doc["schema"] = "equimult.report/v1";
    doc["command"] = command;
    doc["config"] = std::move(config);
    doc["result"] = std::move(result);
    return doc;
}

}  // namespace equimult

#endif
