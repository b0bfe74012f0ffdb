#pragma once

// JSON (de)serialization of models, crossings, and scenario families.
// Numbers travel as decimal strings and are parsed with std::from_chars, so
// files are locale-proof and byte-stable across platforms.

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "shockspec/errors.hpp"
#include "shockspec/model.hpp"
#include "shockspec/scenarios.hpp"

namespace shockspec {

namespace io {

using nlohmann::json;

inline double parse_number(const json& node, const std::string& where) {
    std::string s;
    if (node.is_string()) s = node.get<std::string>();
    else if (node.is_number()) return node.get<double>();
    else throw FormatError(where + ": expected a decimal string");
    double value = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e)
        throw FormatError(where + ": cannot parse number '" + s + "'");
    return value;
}

inline std::string format_number(double x) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw Error("format_number: conversion failed");
    return std::string(buf, ptr);
}

inline Vec parse_vector(const json& node, const std::string& where) {
    if (!node.is_array()) throw FormatError(where + ": expected an array");
    Vec v;
    v.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i)
        v.push_back(parse_number(node[i], where + "[" + std::to_string(i) + "]"));
    return v;
}

inline json vector_to_json(const Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(format_number(x));
    return a;
}

/// A model file: the chain, plus the crossing points of its heteroclinic.
struct ModelFile {
    PLModel model;
    std::vector<Vec> crossings;
};

inline ModelFile parse_model(const json& j) {
    if (!j.contains("dimension") || !j.contains("pieces") || !j.contains("interfaces"))
        throw FormatError("model: need dimension, pieces, interfaces");
    const int n = j["dimension"].get<int>();

    std::vector<LinearPiece> pieces;
    for (std::size_t i = 0; i < j["pieces"].size(); ++i) {
        const json& p = j["pieces"][i];
        const std::string where = "pieces[" + std::to_string(i) + "]";
        Vec qdata = parse_vector(p.at("Q"), where + ".Q");
        if (int(qdata.size()) != n * n)
            throw FormatError(where + ".Q: expected " + std::to_string(n * n) + " entries");
        Mat q(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) q(r, c) = qdata[std::size_t(r) * n + c];
        Vec ustar = parse_vector(p.at("u_star"), where + ".u_star");
        if (int(ustar.size()) != n) throw FormatError(where + ".u_star: wrong dimension");
        pieces.emplace_back(std::move(q), std::move(ustar));
    }

    std::vector<Hyperplane> interfaces;
    for (std::size_t i = 0; i < j["interfaces"].size(); ++i) {
        const json& h = j["interfaces"][i];
        const std::string where = "interfaces[" + std::to_string(i) + "]";
        Vec nrm = parse_vector(h.at("normal"), where + ".normal");
        if (int(nrm.size()) != n) throw FormatError(where + ".normal: wrong dimension");
        interfaces.emplace_back(std::move(nrm), parse_number(h.at("offset"), where + ".offset"));
    }

    ModelFile out{build_model(std::move(pieces), std::move(interfaces)), {}};
    if (j.contains("crossings"))
        for (std::size_t i = 0; i < j["crossings"].size(); ++i)
            out.crossings.push_back(
                parse_vector(j["crossings"][i], "crossings[" + std::to_string(i) + "]"));
    return out;
}

inline json model_to_json(const PLModel& model, const std::vector<Vec>& crossings) {
    json j;
    j["dimension"] = model.dim();
    j["pieces"] = json::array();
    for (const auto& p : model.pieces) {
        json pj;
        json q = json::array();
        for (int r = 0; r < p.Q.rows(); ++r)
            for (int c = 0; c < p.Q.cols(); ++c) q.push_back(format_number(p.Q(r, c)));
        pj["Q"] = q;
        pj["u_star"] = vector_to_json(p.u_star);
        j["pieces"].push_back(pj);
    }
    j["interfaces"] = json::array();
    for (const auto& h : model.interfaces) {
        json hj;
        hj["normal"] = vector_to_json(h.normal);
        hj["offset"] = format_number(h.offset);
        j["interfaces"].push_back(hj);
    }
    j["crossings"] = json::array();
    for (const auto& w : crossings) j["crossings"].push_back(vector_to_json(w));
    return j;
}

/// Scenario files describe a parametrized family rather than one instance.
struct ScenarioFile {
    std::string kind; // "overcompressive" or "bifurcation"
    OvercompressiveParams oc;
    BifurcationParams bif;
};

inline ScenarioFile parse_scenario(const json& j) {
    ScenarioFile out;
    if (!j.contains("scenario")) throw FormatError("scenario: missing 'scenario' field");
    out.kind = j["scenario"].get<std::string>();
    const json params = j.value("params", json::object());
    auto num = [&](const char* key, double dflt) {
        return params.contains(key) ? parse_number(params[key], std::string("params.") + key)
                                    : dflt;
    };
    if (out.kind == "overcompressive") {
        OvercompressiveParams& p = out.oc;
        p.h1m = num("h1m", p.h1m);
        p.h2m = num("h2m", p.h2m);
        p.h1p = num("h1p", p.h1p);
        p.h2p = num("h2p", p.h2p);
        p.theta = num("theta", p.theta);
        if (params.contains("u_minus")) p.u_minus = parse_vector(params["u_minus"], "u_minus");
        if (params.contains("u_plus")) p.u_plus = parse_vector(params["u_plus"], "u_plus");
        p.s = num("s", p.s);
    } else if (out.kind == "bifurcation") {
        BifurcationParams& p = out.bif;
        p.nu_m = num("nu_m", p.nu_m);
        p.kappa_m = num("kappa_m", p.kappa_m);
        p.nu_x = num("nu_x", p.nu_x);
        p.kappa_x = num("kappa_x", p.kappa_x);
        p.nu_p = num("nu_p", p.nu_p);
        p.kappa_p = num("kappa_p", p.kappa_p);
        p.chi_state = num("chi", p.chi_state);
        p.eps = num("eps", p.eps);
    } else {
        throw FormatError("scenario: unknown kind '" + out.kind + "'");
    }
    return out;
}

inline json scenario_to_json(const ScenarioFile& sc) {
    json j;
    j["scenario"] = sc.kind;
    json params;
    if (sc.kind == "overcompressive") {
        const auto& p = sc.oc;
        params["h1m"] = format_number(p.h1m);
        params["h2m"] = format_number(p.h2m);
        params["h1p"] = format_number(p.h1p);
        params["h2p"] = format_number(p.h2p);
        params["theta"] = format_number(p.theta);
        params["u_minus"] = vector_to_json(p.u_minus);
        params["u_plus"] = vector_to_json(p.u_plus);
        params["s"] = format_number(p.s);
    } else {
        const auto& p = sc.bif;
        params["nu_m"] = format_number(p.nu_m);
        params["kappa_m"] = format_number(p.kappa_m);
        params["nu_x"] = format_number(p.nu_x);
        params["kappa_x"] = format_number(p.kappa_x);
        params["nu_p"] = format_number(p.nu_p);
        params["kappa_p"] = format_number(p.kappa_p);
        params["chi"] = format_number(p.chi_state);
        params["eps"] = format_number(p.eps);
    }
    j["params"] = params;
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        // comments allowed: fixtures carry explanatory headers
        return json::parse(buf.str(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline ModelFile load_model_file(const std::string& path) {
    try {
        return parse_model(load_json_file(path));
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

} // namespace io

} // namespace shockspec
