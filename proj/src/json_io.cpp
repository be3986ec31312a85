#include "realcalc/json_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "realcalc/errors.hpp"

namespace realcalc::json_io {

namespace {

template <class F>
auto guarded(std::string_view what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Json::exception& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object()) throw ParseError(std::string("expected an object with field '") + key + "'");
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
    return *it;
}

const Json& array(const Json& j, std::string_view what) {
    if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
    return j;
}

std::size_t count(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ParseError(std::string("field '") + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

double real_number(const Json& j) {
    if (!j.is_number()) throw ParseError("expected a number");
    return j.get<double>();
}

}  // namespace

Json read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Json parse(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
}

// --- numbers and matrices ----------------------------------------------------

Complex decode_complex(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ParseError("complex number must be a number or [re, im]");
}

ComplexMatrix decode_matrix(const Json& j) {
    array(j, "matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(array(j[0], "matrix row").size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = array(j[static_cast<std::size_t>(r)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matrix rows have different lengths");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = decode_complex(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

RowVector decode_row(const Json& j) {
    array(j, "vector");
    RowVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = decode_complex(j[i]);
    return v;
}

RealMatrix decode_real_matrix(const Json& j) {
    array(j, "matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(array(j[0], "matrix row").size());
    RealMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = array(j[static_cast<std::size_t>(r)], "matrix row");
        if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("matrix rows have different lengths");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = real_number(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

Json encode(Complex z) { return Json::array({z.real(), z.imag()}); }

Json encode(const ComplexMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

Json encode(const RowVector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode(v(i)));
    return out;
}

Json encode(const RealMatrix& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

// --- calculi -----------------------------------------------------------------

MatrixRep decode_rep(const Json& j) {
    return guarded("rep", [&] {
        MatrixRep rep;
        const Json& dhat = array(field(j, "Dhat"), "Dhat");
        const std::size_t n = j.contains("dim") ? count(j, "dim") : dhat.size();
        rep.N = count(j, "N");
        for (const auto& d : dhat) rep.dhat.push_back(decode_matrix(d));
        std::vector<double> c(n * n * n, 0.0);
        if (j.contains("structure_constants")) {
            const Json& sc = array(j["structure_constants"], "structure_constants");
            if (!sc.empty()) {
                if (sc.size() != n) throw ShapeError("structure_constants must be n x n x n");
                for (std::size_t a = 0; a < n; ++a) {
                    if (array(sc[a], "structure_constants").size() != n) {
                        throw ShapeError("structure_constants must be n x n x n");
                    }
                    for (std::size_t b = 0; b < n; ++b) {
                        if (array(sc[a][b], "structure_constants").size() != n) {
                            throw ShapeError("structure_constants must be n x n x n");
                        }
                        for (std::size_t k = 0; k < n; ++k) c[(a * n + b) * n + k] = real_number(sc[a][b][k]);
                    }
                }
            }
        }
        rep.lie = LieAlgebraSpec(n, std::move(c));
        return rep;
    });
}

Json encode(const MatrixRep& rep) {
    const std::size_t n = rep.dim();
    Json sc = Json::array();
    if (!rep.lie.is_abelian()) {
        for (std::size_t a = 0; a < n; ++a) {
            Json plane = Json::array();
            for (std::size_t b = 0; b < n; ++b) {
                Json line = Json::array();
                for (std::size_t k = 0; k < n; ++k) line.push_back(rep.lie.constant(a, b, k));
                plane.push_back(std::move(line));
            }
            sc.push_back(std::move(plane));
        }
    }
    Json dhat = Json::array();
    for (const auto& d : rep.dhat) dhat.push_back(encode(d));
    return {{"dim", n}, {"N", rep.N}, {"structure_constants", sc}, {"Dhat", dhat}};
}

CalculusInstance decode_instance(const Json& j) {
    return guarded("instance", [&] {
        CalculusInstance c;
        c.rep = decode_rep(field(j, "rep"));
        c.module_rank = j.contains("module_rank") ? count(j, "module_rank") : 1;
        for (const auto& p : array(field(j, "phi"), "phi")) c.phi.push_back(decode_row(p));
        return c;
    });
}

Json encode(const CalculusInstance& c) {
    Json phi = Json::array();
    for (const auto& p : c.phi) phi.push_back(encode(p));
    return {{"rep", encode(c.rep)}, {"module_rank", c.module_rank}, {"phi", phi}};
}

FreeCalculusInstance decode_free_instance(const Json& j) {
    return guarded("free instance", [&] {
        FreeCalculusInstance f;
        f.rep = decode_rep(field(j, "rep"));
        for (const auto& e : array(field(j, "basis_images"), "basis_images")) {
            std::vector<ComplexMatrix> slots;
            for (const auto& s : array(e, "basis image")) slots.push_back(decode_matrix(s));
            f.basis_images.push_back(std::move(slots));
        }
        return f;
    });
}

Json encode(const FreeCalculusInstance& f) {
    Json images = Json::array();
    for (const auto& e : f.basis_images) {
        Json slots = Json::array();
        for (const auto& s : e) slots.push_back(encode(s));
        images.push_back(std::move(slots));
    }
    return {{"rep", encode(f.rep)}, {"basis_images", images}};
}

AnyInstance decode_any_instance(const Json& j) {
    if (j.is_object() && j.contains("basis_images")) return decode_free_instance(j);
    return decode_instance(j);
}

// --- metrics and connections ---------------------------------------------------

namespace {

std::vector<std::vector<ComplexMatrix>> decode_blocks(const Json& j, std::string_view what) {
    std::vector<std::vector<ComplexMatrix>> out;
    for (const auto& row : array(j, what)) {
        std::vector<ComplexMatrix> r;
        for (const auto& b : array(row, what)) r.push_back(decode_matrix(b));
        out.push_back(std::move(r));
    }
    return out;
}

Json encode_blocks(const std::vector<std::vector<ComplexMatrix>>& blocks) {
    Json out = Json::array();
    for (const auto& row : blocks) {
        Json r = Json::array();
        for (const auto& b : row) r.push_back(encode(b));
        out.push_back(std::move(r));
    }
    return out;
}

std::string kind_of(const Json& j) {
    const Json& k = field(j, "kind");
    if (!k.is_string()) throw ParseError("field 'kind' must be a string");
    return k.get<std::string>();
}

}  // namespace

Metric decode_metric(const Json& j) {
    return guarded("metric", [&]() -> Metric {
        const std::string kind = kind_of(j);
        if (kind == "scalar") return ScalarMetric{real_number(field(j, "x"))};
        if (kind == "aligned") {
            AlignedMetric m;
            m.mtilde = decode_real_matrix(field(j, "Mtilde"));
            m.v0 = decode_row(field(j, "v0"));
            for (const auto& a : array(field(j, "alphas"), "alphas")) m.alphas.push_back(real_number(a));
            return m;
        }
        if (kind == "free") return FreeMetric{decode_blocks(field(j, "hblocks"), "hblocks")};
        throw ParseError("unknown metric kind '" + kind + "'");
    });
}

Json encode(const Metric& m) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ScalarMetric>) {
                return {{"kind", "scalar"}, {"x", v.x}};
            } else if constexpr (std::is_same_v<T, AlignedMetric>) {
                return {{"kind", "aligned"}, {"Mtilde", encode(v.mtilde)}, {"v0", encode(v.v0)}, {"alphas", v.alphas}};
            } else {
                return {{"kind", "free"}, {"hblocks", encode_blocks(v.hblocks)}};
            }
        },
        m);
}

ConnectionSpec decode_connection(const Json& j, std::size_t N) {
    return guarded("connection", [&]() -> ConnectionSpec {
        const std::string kind = kind_of(j);
        if (kind == "lambda_scalar") return LambdaScalar{decode_complex(field(j, "lambda"))};
        const char* key = kind == "lambda_tensor" ? "lambda" : "gamma";
        if (kind != "lambda_tensor" && kind != "christoffel") throw ParseError("unknown connection kind '" + kind + "'");
        const Json& t = array(field(j, key), key);
        const std::size_t n = t.size();
        const auto check = [&](const Json& a) -> const Json& {
            if (array(a, key).size() != n) throw ShapeError(std::string(key) + " must be n x n x n");
            return a;
        };
        if (kind == "lambda_tensor") {
            LambdaTensor out(n);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t l = 0; l < n; ++l) out.at(k, i, l) = decode_complex(check(check(t[k])[i])[l]);
            return out;
        }
        std::size_t size = N;
        if (size == 0 && n > 0) size = static_cast<std::size_t>(decode_matrix(check(check(t[0])[0])[0]).rows());
        Christoffel out(n, size);
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t l = 0; l < n; ++l) {
                    ComplexMatrix g = decode_matrix(check(check(t[k])[i])[l]);
                    if (g.rows() != static_cast<Eigen::Index>(size) || g.cols() != static_cast<Eigen::Index>(size)) {
                        throw ShapeError("Christoffel blocks must be N x N");
                    }
                    out.at(k, i, l) = std::move(g);
                }
            }
        }
        return out;
    });
}

Json encode(const ConnectionSpec& c) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LambdaScalar>) {
                return {{"kind", "lambda_scalar"}, {"lambda", encode(v.lambda)}};
            } else {
                Json t = Json::array();
                for (std::size_t k = 0; k < v.n; ++k) {
                    Json plane = Json::array();
                    for (std::size_t i = 0; i < v.n; ++i) {
                        Json line = Json::array();
                        for (std::size_t j = 0; j < v.n; ++j) line.push_back(encode(v.at(k, i, j)));
                        plane.push_back(std::move(line));
                    }
                    t.push_back(std::move(plane));
                }
                if constexpr (std::is_same_v<T, LambdaTensor>) {
                    return {{"kind", "lambda_tensor"}, {"lambda", t}};
                } else {
                    return {{"kind", "christoffel"}, {"gamma", t}};
                }
            }
        },
        c);
}

// --- witnesses, projections, reports ---------------------------------------------

IsoWitness decode_witness(const Json& j) {
    return guarded("witness", [&] {
        return IsoWitness{decode_matrix(field(j, "U")), decode_real_matrix(field(j, "psi")),
                          decode_matrix(field(j, "X"))};
    });
}

Json encode(const IsoWitness& w) { return {{"U", encode(w.U)}, {"psi", encode(w.psi)}, {"X", encode(w.X)}}; }

ProjectionSpec decode_projection(const Json& j) {
    return guarded("projection", [&] { return ProjectionSpec{decode_blocks(field(j, "pblocks"), "pblocks")}; });
}

Json encode(const ProjectionSpec& p) { return {{"pblocks", encode_blocks(p.pblocks)}}; }

Json encode(const ValidationReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks()) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"detail", c.detail}});
    }
    return {{"passed", r.passed()}, {"checks", checks}};
}

}  // namespace realcalc::json_io
