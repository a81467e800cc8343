#pragma once

// Command-line front end. Needs the single-header JSON and CLI11 libraries
// on the include path; the rest of the library does not.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "moebius/moebius.hpp"

namespace moebius::cli {

using json = nlohmann::json;

enum Exit : int {
    kOk = 0,
    kInequivalent = 1,
    kInputError = 2,
    kDegenerate = 3,
    kNumerical = 4,
};

inline int exit_code(ErrorCode c) {
    switch (c) {
    case ErrorCode::InvalidInput:
    case ErrorCode::PointsNotInGeneralPosition:
    case ErrorCode::IncomparablePairs: return kInputError;
    case ErrorCode::EqualSpheres: return kDegenerate;
    default: return kNumerical;
    }
}

inline constexpr const char* kEnvRank = "MOEBIUS_TOLERANCE_RANK";
inline constexpr const char* kEnvCase = "MOEBIUS_TOLERANCE_CASE";

// ---------------------------------------------------------------- parsing

namespace detail {

[[noreturn]] inline void bad(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::InvalidInput, path + ": " + what);
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "expected a finite number");
    return v;
}

inline int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<int>();
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) bad(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) bad(path + "." + key, "missing");
    return *it;
}

inline Vector vector_of(const json& j, Eigen::Index size, const std::string& path) {
    if (!j.is_array()) bad(path, "expected an array of numbers");
    if (static_cast<Eigen::Index>(j.size()) != size) {
        bad(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
    }
    Vector v(size);
    for (Eigen::Index i = 0; i < size; ++i) v(i) = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    return v;
}

inline double positive_tolerance(const json& j, const std::string& path) {
    const double v = number(j, path);
    if (!(v > 0.0)) bad(path, "must be positive");
    return v;
}

} // namespace detail

/// Defaults overridden by MOEBIUS_TOLERANCE_RANK / MOEBIUS_TOLERANCE_CASE.
inline Tolerances tolerances_from_env(Tolerances base = {}) {
    auto read = [](const char* name, double& slot) {
        const char* raw = std::getenv(name);
        if (!raw || !*raw) return;
        char* end = nullptr;
        const double v = std::strtod(raw, &end);
        if (end == raw || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidInput, std::string(name) + ": expected a positive number");
        }
        slot = v;
    };
    read(kEnvRank, base.rank);
    read(kEnvCase, base.case_band);
    return base;
}

inline Tolerances tolerances_from_json(const json& j, Tolerances base, const std::string& path = "tolerances") {
    if (!j.is_object()) detail::bad(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "rank") base.rank = detail::positive_tolerance(value, path + ".rank");
        else if (key == "case_band") base.case_band = detail::positive_tolerance(value, path + ".case_band");
        else if (key == "membership") base.membership = detail::positive_tolerance(value, path + ".membership");
        else detail::bad(path + "." + key, "unknown tolerance");
    }
    return base;
}

inline Sphere parse_sphere(const json& spec, int n, const Tolerances& tol, const std::string& path) {
    using detail::bad;
    const json& kind_j = detail::field(spec, "kind", path);
    if (!kind_j.is_string()) bad(path + ".kind", "expected a string");
    const std::string kind = kind_j.get<std::string>();
    try {
        if (kind == "sphere") {
            const Vector z = detail::vector_of(detail::field(spec, "center", path), n, path + ".center");
            const double r = detail::number(detail::field(spec, "radius", path), path + ".radius");
            if (!(r > 0.0)) bad(path + ".radius", "must be positive, got " + detail::field(spec, "radius", path).dump());
            if (spec.contains("directions")) {
                const json& d = spec["directions"];
                if (!d.is_array() || d.empty()) bad(path + ".directions", "expected a nonempty array of vectors");
                Matrix dirs(n, static_cast<Eigen::Index>(d.size()));
                for (std::size_t k = 0; k < d.size(); ++k) {
                    dirs.col(static_cast<Eigen::Index>(k)) =
                        detail::vector_of(d[k], n, path + ".directions[" + std::to_string(k) + "]");
                }
                return sphere_from_center_radius(z, r, dirs, tol);
            }
            return hypersphere_from_center_radius(z, r, tol);
        }
        if (kind == "plane") {
            const Vector b = detail::vector_of(detail::field(spec, "normal", path), n, path + ".normal");
            const double p = detail::number(detail::field(spec, "offset", path), path + ".offset");
            if (b.norm() == 0.0) bad(path + ".normal", "must be nonzero");
            return hypersphere_from_plane(b, p, tol);
        }
        if (kind == "points") {
            const int m = detail::integer(detail::field(spec, "dim", path), path + ".dim");
            if (m < 0 || m >= n) bad(path + ".dim", "must satisfy 0 <= dim < ambient_n");
            const json& pts = detail::field(spec, "points", path);
            if (!pts.is_array()) bad(path + ".points", "expected an array");
            if (static_cast<int>(pts.size()) != m + 2) {
                bad(path + ".points", "expected dim + 2 = " + std::to_string(m + 2) + " points, got " +
                                          std::to_string(pts.size()));
            }
            std::vector<ExtendedPoint> q;
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const std::string p = path + ".points[" + std::to_string(k) + "]";
                if (pts[k].is_string()) {
                    if (pts[k].get<std::string>() != "inf") bad(p, "the only accepted string is \"inf\"");
                    q.push_back(ExtendedPoint::infinity(n));
                } else {
                    q.push_back(ExtendedPoint::finite(detail::vector_of(pts[k], n, p)));
                }
            }
            return sphere_from_points(q, m, tol);
        }
        if (kind == "subspace") {
            const json& basis = detail::field(spec, "basis", path);
            if (!basis.is_array() || basis.size() < 2) bad(path + ".basis", "expected at least two vectors");
            Matrix b(n + 2, static_cast<Eigen::Index>(basis.size()));
            for (std::size_t k = 0; k < basis.size(); ++k) {
                b.col(static_cast<Eigen::Index>(k)) =
                    detail::vector_of(basis[k], n + 2, path + ".basis[" + std::to_string(k) + "]");
            }
            return Sphere(Subspace(b, tol));
        }
    } catch (const Error& e) {
        if (std::string(e.what()).find(path) != std::string::npos) throw;
        const ErrorCode code = e.code() == ErrorCode::DegenerateSubspace ? ErrorCode::InvalidInput : e.code();
        throw Error(code, path + ": " + e.what());
    }
    bad(path + ".kind", "unknown kind \"" + kind + "\" (expected sphere, plane, points or subspace)");
}

struct Request {
    json input;
    int ambient_n;
    std::vector<Sphere> spheres;
    Tolerances tol;

    SpherePair pair() const { return {spheres[0], spheres[1]}; }
};

/// Flag values win over the document's "tolerances", which win over `base`.
struct ToleranceFlags {
    std::optional<double> rank;
    std::optional<double> case_band;
};

inline Tolerances apply_flags(Tolerances t, const ToleranceFlags& f) {
    if (f.rank) {
        if (!(*f.rank > 0.0)) throw Error(ErrorCode::InvalidInput, "--tolerance-rank: must be positive");
        t.rank = *f.rank;
    }
    if (f.case_band) {
        if (!(*f.case_band > 0.0)) throw Error(ErrorCode::InvalidInput, "--tolerance-case: must be positive");
        t.case_band = *f.case_band;
    }
    return t;
}

inline Request parse_request(const json& doc, const Tolerances& base = {}, const ToleranceFlags& flags = {}) {
    if (!doc.is_object()) detail::bad("(document)", "expected an object");
    const int n = detail::integer(detail::field(doc, "ambient_n", "(document)"), "ambient_n");
    if (n < 1) detail::bad("ambient_n", "must be >= 1");
    Tolerances tol = base;
    if (doc.contains("tolerances")) tol = tolerances_from_json(doc["tolerances"], tol);
    tol = apply_flags(tol, flags);
    const json& specs = detail::field(doc, "spheres", "(document)");
    if (!specs.is_array() || specs.size() != 2) detail::bad("spheres", "expected exactly two sphere specs");
    std::vector<Sphere> spheres;
    for (std::size_t i = 0; i < 2; ++i) spheres.push_back(parse_sphere(specs[i], n, tol, "spheres[" + std::to_string(i) + "]"));
    return Request{doc, n, std::move(spheres), tol};
}

inline json read_json_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::InvalidInput, file + ": cannot open");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, file + ": " + e.what());
    }
}

// ---------------------------------------------------------------- reports

inline json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

/// Rows of the matrix.
inline json to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
    return out;
}

inline json to_json(const ExtendedPoint& q) { return q.is_infinity() ? json("inf") : to_json(q.coords()); }

inline Matrix matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) detail::bad(path, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        m.row(i) = detail::vector_of(j[static_cast<std::size_t>(i)], cols, path + "[" + std::to_string(i) + "]").transpose();
    return m;
}

inline json tolerances_json(const Tolerances& t) {
    return {{"rank", t.rank}, {"case_band", t.case_band}, {"membership", t.membership}};
}

inline json frames_json(const AdaptedFrames& f) {
    return {{"a", to_json(f.a)}, {"b", to_json(f.b)}, {"gram_residual", f.gram_residual}, {"case_residual", f.case_residual}};
}

inline json case_json(PairCase c) { return {{"tag", static_cast<int>(c)}, {"name", to_string(c)}}; }

inline json intersection_json(const PairAnalysis& a) {
    json out = {{"common_dim", a.common_dim},
                {"common_type", to_string(a.common_type)},
                {"sphere_dim", a.intersection_dim},
                {"contained", a.contained}};
    out["tangency_point"] = a.tangency_point ? to_json(*a.tangency_point) : json(nullptr);
    return out;
}

inline json analysis_json(const Request& req, const PairAnalysis& a) {
    json angles = json::array();
    for (const auto& s : a.angles) angles.push_back({{"kind", to_string(s.kind)}, {"beta", s.beta}, {"alpha", s.alpha}});
    json out = {{"input", req.input},
                {"ambient_n", req.ambient_n},
                {"analysis_n", a.ambient_n},
                {"m", a.m},
                {"l", a.l},
                {"swapped", a.swapped},
                {"general_position", a.general_position},
                {"eigenvalues", to_json(a.eigenvalues)},
                {"rank_A", a.rank_A},
                {"angles", angles},
                {"case", case_json(a.case_tag)},
                {"intersection", intersection_json(a)},
                {"tolerances", tolerances_json(req.tol)}};
    out["reduction"] = a.reduction ? json{{"reduced_n", a.reduction->reduced_n}} : json(nullptr);
    if (a.frames) out["frames"] = frames_json(*a.frames);
    return out;
}

// ---------------------------------------------------------------- text output

namespace detail {

inline std::string num(double v) {
    if (v == 0.0) v = 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string row(const Vector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + num(v(i));
    return s;
}

inline void matrix_table(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "  ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << std::setw(24) << num(m(i, j));
        out << '\n';
    }
}

} // namespace detail

inline void analysis_table(std::ostream& out, const PairAnalysis& a, const Tolerances& t) {
    out << "n = " << a.ambient_n << ", m = " << a.m << ", l = " << a.l << (a.swapped ? " (swapped)" : "") << '\n';
    out << "general position: " << (a.general_position ? "yes" : "no");
    if (a.reduction) out << " (reduced to n = " << a.reduction->reduced_n << ")";
    out << '\n';
    out << "case " << static_cast<int>(a.case_tag) << ": " << to_string(a.case_tag) << '\n';
    out << "U cap W: dim " << a.common_dim << ", " << to_string(a.common_type) << '\n';
    if (a.intersection_dim >= 0) out << "intersection: " << a.intersection_dim << "-sphere" << (a.contained ? " (contained)" : "") << '\n';
    if (a.tangency_point) {
        out << "tangency point: " << (a.tangency_point->is_infinity() ? "inf" : detail::row(a.tangency_point->coords())) << '\n';
    }
    out << std::left << "  " << std::setw(4) << "i" << std::setw(26) << "alpha" << std::setw(12) << "kind" << "beta\n";
    for (std::size_t i = 0; i < a.angles.size(); ++i) {
        const auto& s = a.angles[i];
        out << "  " << std::setw(4) << i + 1 << std::setw(26) << detail::num(s.alpha) << std::setw(12) << to_string(s.kind)
            << detail::num(s.beta) << '\n';
    }
    out << std::right;
    if (a.frames) {
        out << "frame a (columns):\n";
        detail::matrix_table(out, a.frames->a);
        out << "frame b (columns):\n";
        detail::matrix_table(out, a.frames->b);
        out << "residuals: gram " << detail::num(a.frames->gram_residual) << ", case " << detail::num(a.frames->case_residual)
            << '\n';
    }
    out << "tolerances: rank " << detail::num(t.rank) << ", case band " << detail::num(t.case_band) << '\n';
}

// ---------------------------------------------------------------- commands

struct Options {
    ToleranceFlags flags;
    bool pretty = false;
    bool frames = false;
    std::uint64_t seed = 0;
};

inline void emit(std::ostream& out, const json& j, bool pretty) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; }

inline Request load(const std::string& file, const Options& o) {
    return parse_request(read_json_file(file), tolerances_from_env(), o.flags);
}

inline int cmd_invariants(const std::string& file, const Options& o, std::ostream& out) {
    const Request req = load(file, o);
    const PairAnalysis a = invariants(req.spheres[0], req.spheres[1], req.tol, o.frames);
    if (o.pretty) analysis_table(out, a, req.tol);
    else emit(out, analysis_json(req, a), false);
    return kOk;
}

inline int cmd_classify(const std::string& file, const Options& o, std::ostream& out) {
    const Request req = load(file, o);
    const PairAnalysis a = invariants(req.spheres[0], req.spheres[1], req.tol);
    if (o.pretty) {
        out << "case " << static_cast<int>(a.case_tag) << ": " << to_string(a.case_tag) << '\n';
        return kOk;
    }
    emit(out, {{"case", case_json(a.case_tag)}, {"intersection", intersection_json(a)}}, false);
    return kOk;
}

inline int cmd_frames(const std::string& file, const Options& o, std::ostream& out) {
    const Request req = load(file, o);
    const PairAnalysis a = invariants(req.spheres[0], req.spheres[1], req.tol, true);
    if (o.pretty) {
        analysis_table(out, a, req.tol);
        return kOk;
    }
    json j = frames_json(*a.frames);
    j["case"] = case_json(a.case_tag);
    j["eigenvalues"] = to_json(a.eigenvalues);
    j["swapped"] = a.swapped;
    j["reduction"] = a.reduction ? to_json(a.reduction->embedding) : json(nullptr);
    emit(out, j, false);
    return kOk;
}

inline int cmd_equivalent(const std::string& fa, const std::string& fb, double eig_tol, const Options& o,
                          std::ostream& out) {
    const Request a = load(fa, o);
    const Request b = load(fb, o);
    const bool eq = equivalent(a.pair(), b.pair(), eig_tol, a.tol);
    json j = {{"equivalent", eq}, {"tolerance", eig_tol}};
    for (const auto& [name, req] : {std::pair<const char*, const Request*>{"a", &a}, {"b", &b}}) {
        try {
            j[name] = to_json(invariants(req->spheres[0], req->spheres[1], req->tol).eigenvalues);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EqualSpheres) throw;
            j[name] = "equal spheres";
        }
    }
    if (o.pretty) out << (eq ? "equivalent" : "not equivalent") << '\n';
    else emit(out, j, false);
    return eq ? kOk : kInequivalent;
}

/// Max subspace residual of g applied to pair A against pair B.
inline json verify_witness(const Matrix& g, const Request& a, const Request& b) {
    const double defect = moebius_defect(g);
    const double form_tol = 1e-9 * std::max(1.0, g.squaredNorm());
    double residual = std::numeric_limits<double>::infinity();
    if (g.rows() == a.ambient_n + 2 && g.cols() == g.rows()) {
        residual = moebius::detail::witness_residual(g, a.pair(), b.pair(), a.tol);
    }
    return {{"residual", residual}, {"form_defect", defect}, {"verified", residual < 1e-8 && defect <= form_tol}};
}

inline int cmd_witness(const std::string& fa, const std::string& fb, const std::string& verify_file,
                       const std::string& output_file, const Options& o, std::ostream& out) {
    const Request a = load(fa, o);
    const Request b = load(fb, o);
    if (!verify_file.empty()) {
        const json doc = read_json_file(verify_file);
        const Matrix g = matrix_from_json(detail::field(doc, "matrix", verify_file), verify_file + ".matrix");
        const json v = verify_witness(g, a, b);
        emit(out, v, o.pretty);
        return v["verified"].get<bool>() ? kOk : kNumerical;
    }
    if (!equivalent(a.pair(), b.pair(), 1e-8, a.tol)) {
        emit(out, {{"equivalent", false}}, o.pretty);
        return kInequivalent;
    }
    const Witness w = witness(a.pair(), b.pair(), 1e-8, a.tol);
    json j = {{"matrix", to_json(w.map.matrix())},
              {"residual", w.residual},
              {"retried", w.retried},
              {"determinant_sign", w.map.determinant_sign()}};
    if (!output_file.empty()) {
        std::ofstream f(output_file);
        if (!f) throw Error(ErrorCode::InvalidInput, output_file + ": cannot write");
        f << j.dump() << '\n';
    }
    if (o.pretty) {
        out << "witness (residual " << detail::num(w.residual) << "):\n";
        detail::matrix_table(out, w.map.matrix());
    } else {
        emit(out, j, false);
    }
    return kOk;
}

inline std::vector<double> parse_numbers(const std::vector<std::string>& args, const std::string& what) {
    std::vector<double> v;
    for (const auto& s : args) {
        char* end = nullptr;
        const double x = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0' || !std::isfinite(x)) {
            throw Error(ErrorCode::InvalidInput, what + ": \"" + s + "\" is not a finite number");
        }
        v.push_back(x);
    }
    return v;
}

/// Stereographic image of a Minkowski vector given by its n+2 coordinates.
inline int cmd_project(const std::vector<std::string>& coords, std::ostream& out) {
    const auto v = parse_numbers(coords, "project");
    if (v.size() < 3) throw Error(ErrorCode::InvalidInput, "project: need n+2 >= 3 coordinates");
    const ExtendedPoint q = stereographic(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    out << (q.is_infinity() ? std::string("inf") : detail::row(q.coords())) << '\n';
    return kOk;
}

/// Lift of a point of E^n (or "inf" with --n) to the Minkowski model.
inline int cmd_lift(const std::vector<std::string>& coords, int n, std::ostream& out) {
    ExtendedPoint q = ExtendedPoint::infinity(1);
    if (coords.size() == 1 && coords[0] == "inf") {
        if (n < 1) throw Error(ErrorCode::InvalidInput, "lift inf: pass the ambient dimension with --n");
        q = ExtendedPoint::infinity(n);
    } else {
        const auto v = parse_numbers(coords, "lift");
        if (v.empty()) throw Error(ErrorCode::InvalidInput, "lift: need at least one coordinate");
        q = ExtendedPoint::finite(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    out << detail::row(lift(q)) << '\n';
    return kOk;
}

/// A request document with two "points" spheres through Gaussian points.
inline json random_pair_document(int n, int m, int l, std::uint64_t seed) {
    if (n < 1 || m < 0 || l < 0 || m >= n || l >= n) {
        throw Error(ErrorCode::InvalidInput, "random-pair: need 0 <= m, l < n");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    json spheres = json::array();
    for (int dim : {m, l}) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == 100) throw Error(ErrorCode::InternalError, "random-pair: sampling failed");
            std::vector<ExtendedPoint> pts;
            json arr = json::array();
            for (int k = 0; k < dim + 2; ++k) {
                Vector y(n);
                for (int i = 0; i < n; ++i) y(i) = normal(rng);
                pts.push_back(ExtendedPoint::finite(y));
                arr.push_back(to_json(y));
            }
            try {
                sphere_from_points(pts, dim);
            } catch (const Error& e) {
                if (e.code() == ErrorCode::PointsNotInGeneralPosition) continue;
                throw;
            }
            spheres.push_back({{"kind", "points"}, {"dim", dim}, {"points", arr}});
            break;
        }
    }
    return {{"ambient_n", n}, {"seed", seed}, {"spheres", spheres}};
}

inline int cmd_random_pair(int n, int m, int l, const Options& o, std::ostream& out) {
    emit(out, random_pair_document(n, m, l, o.seed), o.pretty);
    return kOk;
}

// ---------------------------------------------------------------- dispatch

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moebius invariants of pairs of subspheres"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--tolerance-rank", o.flags.rank, "rank threshold (default 1e-9)");
    app.add_option("--tolerance-case", o.flags.case_band, "half-width of the tangency band (default 1e-8)");
    app.add_option("--seed", o.seed, "seed for random-pair");
    app.add_flag("--pretty", o.pretty, "human-readable output");
    app.add_flag("--frames", o.frames, "include adapted frames in the invariants report");

    std::string file_a, file_b, verify_file, output_file;
    std::vector<std::string> coords;
    double eig_tol = 1e-8;
    int rn = 3, rm = 1, rl = 1, lift_n = 0;

    auto* inv = app.add_subcommand("invariants", "full analysis of a pair");
    inv->add_option("file", file_a)->required();
    auto* cls = app.add_subcommand("classify", "case of a pair");
    cls->add_option("file", file_a)->required();
    auto* frm = app.add_subcommand("frames", "adapted frames of a pair");
    frm->add_option("file", file_a)->required();
    auto* eqv = app.add_subcommand("equivalent", "decide Moebius equivalence (exit 0 yes, 1 no)");
    eqv->add_option("file_a", file_a)->required();
    eqv->add_option("file_b", file_b)->required();
    eqv->add_option("--eigen-tolerance", eig_tol, "componentwise eigenvalue tolerance");
    auto* wit = app.add_subcommand("witness", "Moebius matrix carrying pair A onto pair B");
    wit->add_option("file_a", file_a)->required();
    wit->add_option("file_b", file_b)->required();
    wit->add_option("--verify", verify_file, "check a previously emitted witness instead of computing one");
    wit->add_option("--output", output_file, "also write the witness document to this file");
    auto* prj = app.add_subcommand("project", "stereographic projection of a Minkowski vector");
    prj->add_option("coords", coords)->required();
    auto* lft = app.add_subcommand("lift", "lift a point of E^n (or inf) to the Minkowski model");
    lft->add_option("coords", coords)->required();
    lft->add_option("--n", lift_n, "ambient dimension for inf");
    auto* rnd = app.add_subcommand("random-pair", "reproducible random request document");
    rnd->add_option("--n", rn, "ambient dimension")->capture_default_str();
    rnd->add_option("--m", rm, "first sphere dimension")->capture_default_str();
    rnd->add_option("--l", rl, "second sphere dimension")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o_out, o_err;
        const int code = app.exit(e, o_out, o_err);
        out << o_out.str();
        err << o_err.str();
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*inv) return cmd_invariants(file_a, o, out);
        if (*cls) return cmd_classify(file_a, o, out);
        if (*frm) return cmd_frames(file_a, o, out);
        if (*eqv) return cmd_equivalent(file_a, file_b, eig_tol, o, out);
        if (*wit) return cmd_witness(file_a, file_b, verify_file, output_file, o, out);
        if (*prj) return cmd_project(coords, out);
        if (*lft) return cmd_lift(coords, lift_n, out);
        if (*rnd) return cmd_random_pair(rn, rm, rl, o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

} // namespace moebius::cli
