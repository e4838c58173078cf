#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "annuli/certificates.hpp"
#include "annuli/grid.hpp"
#include "annuli/optimize.hpp"
#include "annuli/problem.hpp"

namespace annuli {

using nlohmann::json;

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// ProblemSpec <-> JSON {"a":..,"b":..,"c":..,"d":..,"j":..}
// ---------------------------------------------------------------------------

inline json problem_to_json(const ProblemSpec& s) {
    return json{{"a", s.domain_scale},
                {"b", s.domain_scale * s.r},
                {"c", s.target_scale},
                {"d", s.target_scale * s.R},
                {"j", s.j}};
}

inline ProblemSpec problem_from_json(const json& doc) {
    for (const char* key : {"a", "b", "c", "d", "j"}) {
        if (!doc.contains(key)) {
            throw IoError(std::string("problem JSON missing field \"") + key + "\"");
        }
    }
    return normalize_problem(doc["a"].get<double>(), doc["b"].get<double>(),
                             doc["c"].get<double>(), doc["d"].get<double>(), doc["j"].get<int>());
}

inline ProblemSpec read_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open problem file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError("cannot parse problem file " + path + ": " + e.what());
    }
    return problem_from_json(doc);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json report_to_json(const ConvergenceReport& r) {
    return json{{"iterations", r.iterations}, {"energy", r.energy},
                {"oracle_energy", r.oracle_energy}, {"gap_rel", r.gap_rel},
                {"active_fraction", r.active_fraction}, {"trace", r.trace}};
}

inline json report_to_json(const CertificateReport& r) {
    return json{{"lagrangian_a", {r.lagrangian_a.lhs, r.lagrangian_a.rhs}},
                {"lagrangian_b", {r.lagrangian_b.lhs, r.lagrangian_b.rhs}},
                {"lagrangian_c", {r.lagrangian_c.lhs, r.lagrangian_c.rhs}},
                {"lagrangian_d", {r.lagrangian_d.lhs, r.lagrangian_d.rhs}},
                {"certified_value", r.certified_value},
                {"energy", r.energy},
                {"slack", r.slack},
                {"max_pointwise_violation", r.max_pointwise_violation}};
}

inline void write_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// DiscreteMap <-> CSV with header t,tau,u,v (radial-major order)
// ---------------------------------------------------------------------------

namespace detail {
inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

inline void write_map_csv(const std::string& path, const DiscreteMap& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    out << "t,tau,u,v\n";
    for (int i = 0; i < m.grid.n_radial; ++i) {
        const double t = m.grid.radius(i);
        for (int k = 0; k < m.grid.n_angular; ++k) {
            const Complex w = m.at(i, k);
            out << detail::format_full(t) << ',' << detail::format_full(m.grid.angle(k)) << ','
                << detail::format_full(w.real()) << ',' << detail::format_full(w.imag()) << '\n';
        }
    }
}

/// Read a map written by write_map_csv. The CSV carries the grid but not the
/// admissibility class, so the target radius and degree are supplied by the
/// caller.
inline DiscreteMap read_map_csv(const std::string& path, double target_R, int degree) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open map file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,tau,u,v", 0) != 0) {
        throw IoError("map CSV must start with header t,tau,u,v: " + path);
    }
    std::vector<double> ts;
    std::vector<Complex> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t, tau, u, v;
        char comma;
        if (!(ss >> t >> comma >> tau >> comma >> u >> comma >> v)) {
            throw IoError("malformed CSV row in " + path + ": " + line);
        }
        ts.push_back(t);
        vals.push_back(Complex(u, v));
    }
    if (ts.empty()) throw IoError("empty map CSV: " + path);
    std::size_t nt = 1;
    while (nt < ts.size() && ts[nt] == ts[0]) ++nt;
    if (ts.size() % nt != 0) throw IoError("CSV rows do not form a full grid: " + path);
    const int n_radial = static_cast<int>(ts.size() / nt);
    const PolarGrid grid(ts.front(), ts.back(), n_radial, static_cast<int>(nt));
    DiscreteMap m(grid, target_R, degree);
    m.values = std::move(vals);
    return m;
}

// ---------------------------------------------------------------------------
// DiscreteMap <-> compact little-endian binary:
//   u32 n_radial, u32 n_angular, f64 t_min, f64 t_max, f64 R, f64 j,
//   then u,v per node in radial-major order.
// ---------------------------------------------------------------------------

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) buf.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

inline void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int b = 0; b < 8; ++b) buf.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

inline std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(p[b]);
    return v;
}

inline double get_f64(const char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(p[b]);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

}  // namespace detail

inline void write_map_binary(const std::string& path, const DiscreteMap& m) {
    std::string buf;
    buf.reserve(40 + 16 * m.values.size());
    detail::put_u32(buf, static_cast<std::uint32_t>(m.grid.n_radial));
    detail::put_u32(buf, static_cast<std::uint32_t>(m.grid.n_angular));
    detail::put_f64(buf, m.grid.t_min);
    detail::put_f64(buf, m.grid.t_max);
    detail::put_f64(buf, m.target_R);
    detail::put_f64(buf, static_cast<double>(m.degree_target));
    for (const Complex& w : m.values) {
        detail::put_f64(buf, w.real());
        detail::put_f64(buf, w.imag());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline DiscreteMap read_map_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open map file: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (buf.size() < 40) throw IoError("truncated binary map: " + path);
    const std::uint32_t nr = detail::get_u32(buf.data());
    const std::uint32_t nt = detail::get_u32(buf.data() + 4);
    if (nr > 100000000u || nt > 100000000u) {
        throw IoError("implausible grid dimensions in binary map: " + path);
    }
    const double t_min = detail::get_f64(buf.data() + 8);
    const double t_max = detail::get_f64(buf.data() + 16);
    const double R = detail::get_f64(buf.data() + 24);
    const double jd = detail::get_f64(buf.data() + 32);
    const std::size_t need = 40 + 16ull * nr * nt;
    if (buf.size() != need) throw IoError("binary map size mismatch: " + path);
    const PolarGrid grid(t_min, t_max, static_cast<int>(nr), static_cast<int>(nt));
    DiscreteMap m(grid, R, static_cast<int>(std::lround(jd)));
    for (std::size_t n = 0; n < m.values.size(); ++n) {
        m.values[n] = Complex(detail::get_f64(buf.data() + 40 + 16 * n),
                              detail::get_f64(buf.data() + 48 + 16 * n));
    }
    return m;
}

}  // namespace annuli
