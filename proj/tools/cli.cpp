#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>

#include <CLI11.hpp>

#include "realcalc/calculus.hpp"
#include "realcalc/classify1d.hpp"
#include "realcalc/errors.hpp"
#include "realcalc/iso_nd.hpp"
#include "realcalc/json_io.hpp"
#include "realcalc/metric_conn.hpp"
#include "realcalc/projection.hpp"

namespace realcalc::cli {

namespace {

using json_io::Json;

struct Options {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    bool json_only = false;

    std::string instance;
    std::string instance_b;
    std::string metric;
    std::string connection;
    std::string witness;
    std::size_t budget = 2000;
    std::size_t k = 0;
    bool anti = false;
};

enum class Status { pass, fail, unknown };

struct Report {
    Report() = default;
    explicit Report(std::string cmd, Status s = Status::pass) : command(std::move(cmd)), status(s) {}

    std::string command;
    Status status = Status::pass;
    Json residuals = Json::object();
    Json artifacts = Json::object();
    std::string error;

    void merge(const ValidationReport& r, const std::string& prefix = {}) {
        for (const auto& c : r.checks()) residuals[prefix + c.name] = c.residual;
        if (!r.passed()) status = Status::fail;
    }
};

const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::unknown: return "unknown";
    }
    return "fail";
}

Json to_json(const Report& r) {
    Json j = {{"command", r.command},
              {"status", status_name(r.status)},
              {"residuals", r.residuals},
              {"artifacts", r.artifacts}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

Tolerance tolerance(const Options& o) { return Tolerance{o.tol}; }

CalculusInstance load_instance(const std::string& path) {
    return json_io::decode_instance(json_io::read_file(path));
}

std::optional<Metric> load_metric(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return json_io::decode_metric(json_io::read_file(path));
}

bool is_1d_cn(const CalculusInstance& c) { return c.dim() == 1 && c.module_rank == 1; }

/// Fails the report when the calculus is invalid; returns whether it is valid.
bool require_valid_calculus(const CalculusInstance& c, const Tolerance& tol, Report& r) {
    require_consistent_shapes(c);
    const ValidationReport v = validate_calculus(c, tol);
    if (v.passed()) return true;
    r.merge(v, "validate.");
    r.status = Status::fail;
    r.error = "instance is not a valid real calculus";
    return false;
}

// --- validate / classify / count / enumerate ------------------------------------

Report cmd_validate(const Options& o) {
    Report r{"validate"};
    const auto any = json_io::decode_any_instance(json_io::read_file(o.instance));
    const ValidationReport v = std::visit(
        [&](const auto& inst) -> ValidationReport {
            using T = std::decay_t<decltype(inst)>;
            if constexpr (std::is_same_v<T, CalculusInstance>) {
                require_consistent_shapes(inst);
                return validate_calculus(inst, tolerance(o));
            } else {
                require_consistent_shapes(inst);
                return validate_free_calculus(inst, tolerance(o));
            }
        },
        any);
    r.merge(v);
    r.artifacts["report"] = json_io::encode(v);
    return r;
}

Report cmd_classify(const Options& o) {
    Report r{"classify"};
    const Tolerance tol = tolerance(o);
    const CalculusInstance c = load_instance(o.instance);
    require_consistent_shapes(c);
    if (!is_1d_cn(c)) throw UnsupportedError("classify requires dim g = 1 and module C^N");
    if (!require_valid_calculus(c, tol, r)) return r;

    const Canonical1D canon = canonicalize_1d(c, tol);
    const bool anti = anti_selfsimilar(canon.spectrum, tol);
    const ZeroPattern pattern = zero_pattern(canon.instance, tol);
    Json spectrum = Json::array();
    for (const auto& b : canon.spectrum.blocks) {
        spectrum.push_back({{"eigenvalue", json_io::encode(b.eigenvalue)}, {"multiplicity", b.multiplicity}});
    }
    r.artifacts = {{"spectrum", spectrum},
                   {"anti_selfsimilar", anti},
                   {"zero_pattern", pattern.to_string()},
                   {"representative", class_representative(pattern, anti).to_string()},
                   {"k", pattern.size()},
                   {"classes", count_classes(pattern.size(), anti)},
                   {"canonical_instance", json_io::encode(canon.instance)}};
    return r;
}

Report cmd_count(const Options& o) {
    Report r{"count"};
    r.artifacts = {{"k", o.k}, {"anti", o.anti}, {"count", count_classes(o.k, o.anti)}};
    return r;
}

Report cmd_enumerate(const Options& o) {
    Report r{"enumerate"};
    const auto classes = enumerate_classes(o.k, o.anti);
    Json list = Json::array();
    for (const auto& p : classes) list.push_back(p.to_string());
    r.artifacts = {{"k", o.k}, {"anti", o.anti}, {"count", classes.size()}, {"classes", list}};
    return r;
}

// --- iso -----------------------------------------------------------------------

void add_witness_check(Report& r, const WitnessCheck& w) {
    r.residuals["conjugation"] = w.conjugation_residual;
    r.residuals["anchor"] = w.anchor_residual;
    if (!w.accepted) {
        r.status = Status::fail;
        r.artifacts["failure"] = w.failure;
    }
}

Report cmd_iso(const Options& o) {
    Report r{"iso"};
    const Tolerance tol = tolerance(o);
    const auto any_a = json_io::decode_any_instance(json_io::read_file(o.instance));
    const auto any_b = json_io::decode_any_instance(json_io::read_file(o.instance_b));

    if (std::holds_alternative<FreeCalculusInstance>(any_a) || std::holds_alternative<FreeCalculusInstance>(any_b)) {
        const auto* fa = std::get_if<FreeCalculusInstance>(&any_a);
        const auto* fb = std::get_if<FreeCalculusInstance>(&any_b);
        if (!fa || !fb) throw ShapeError("cannot compare a free calculus with a calculus over (C^N)^m");
        if (o.witness.empty()) throw UnsupportedError("free calculi need --witness with U and psi");
        const IsoWitness w = json_io::decode_witness(json_io::read_file(o.witness));
        const WitnessCheck check = check_compatible_pair(fa->rep, fb->rep, w.U, w.psi, tol);
        add_witness_check(r, check);
        return r;
    }

    const auto& a = std::get<CalculusInstance>(any_a);
    const auto& b = std::get<CalculusInstance>(any_b);
    require_consistent_shapes(a);
    require_consistent_shapes(b);
    if (a.N() != b.N() || a.dim() != b.dim() || a.module_rank != b.module_rank) {
        throw ShapeError("instances differ in N, dim g or module rank");
    }
    if (!require_valid_calculus(a, tol, r) || !require_valid_calculus(b, tol, r)) return r;

    if (!o.witness.empty()) {
        const IsoWitness w = json_io::decode_witness(json_io::read_file(o.witness));
        add_witness_check(r, verify_isomorphism_witness(a, b, w, tol));
        r.artifacts["method"] = "witness";
        return r;
    }

    if (is_1d_cn(a)) {
        const bool iso = is_isomorphic_1d(a, b, tol);
        r.artifacts["method"] = "exact_1d";
        r.artifacts["isomorphic"] = iso;
        r.artifacts["zero_pattern_a"] = zero_pattern(canonical_diag_1d(a, tol), tol).to_string();
        r.artifacts["zero_pattern_b"] = zero_pattern(canonical_diag_1d(b, tol), tol).to_string();
        if (!iso) {
            r.status = Status::fail;
            return r;
        }
        if (const auto w = construct_witness_1d(a, b, tol)) {
            add_witness_check(r, verify_isomorphism_witness(a, b, *w, tol));
            r.artifacts["witness"] = json_io::encode(*w);
        }
        return r;
    }

    if (a.module_rank != a.dim()) throw UnsupportedError("witness search requires module (C^N)^n with n = dim g");
    r.artifacts["method"] = "search";
    r.artifacts["budget"] = o.budget;
    r.artifacts["seed"] = o.seed;
    const auto w = search_witness(a, b, o.budget, o.seed, tol);
    if (!w) {
        r.status = Status::unknown;
        return r;
    }
    add_witness_check(r, verify_isomorphism_witness(a, b, *w, tol));
    r.artifacts["witness"] = json_io::encode(*w);
    return r;
}

// --- connections -------------------------------------------------------------------

ScalarMetric scalar_metric_or_default(const std::optional<Metric>& metric) {
    if (!metric) return ScalarMetric{1.0};
    const auto* h = std::get_if<ScalarMetric>(&*metric);
    if (!h) throw UnsupportedError("module C^N needs a scalar metric");
    return *h;
}

AlignedMetric default_aligned_metric(const CalculusInstance& c, const Tolerance& tol) {
    const auto al = detect_alignment(c, tol);
    if (!al) throw UnsupportedError("anchors are not aligned");
    const auto n = static_cast<Eigen::Index>(c.dim());
    return AlignedMetric{RealMatrix::Identity(n, n), al->v0, al->alphas};
}

Report cmd_levi_civita(const Options& o) {
    Report r{"levi-civita"};
    const Tolerance tol = tolerance(o);
    const VerifyOptions vo{16, o.seed};
    const auto any = json_io::decode_any_instance(json_io::read_file(o.instance));
    const auto metric = load_metric(o.metric);

    if (const auto* f = std::get_if<FreeCalculusInstance>(&any)) {
        if (!metric || !std::holds_alternative<FreeMetric>(*metric)) {
            throw ArgumentError("a free calculus needs --metric with kind \"free\"");
        }
        const auto& h = std::get<FreeMetric>(*metric);
        const Christoffel gamma = christoffel_free(*f, h, tol);
        r.merge(verify_pseudo_riemannian(*f, h, gamma, tol, vo));
        r.artifacts["connection"] = json_io::encode(ConnectionSpec{gamma});
        return r;
    }

    const auto& c = std::get<CalculusInstance>(any);
    require_consistent_shapes(c);
    if (!require_valid_calculus(c, tol, r)) return r;

    if (is_1d_cn(c)) {
        const ScalarMetric h = scalar_metric_or_default(metric);
        if (!is_real_metric_calculus(c, h, tol)) throw InvalidMetricError("scalar metric must have x != 0");
        r.residuals["eigenvector"] = eigenvector_residual_1d(c);
        const auto lambda = lc_exists_1d(c, tol);
        if (!lambda) {
            r.status = Status::fail;
            r.artifacts["levi_civita"] = false;
            r.artifacts["diagnosis"] = "v0 Dhat (1 - p) != 0: v0 is not an eigenvector of Dhat";
            return r;
        }
        const LeviCivita1D lc = lc_connection_1d(c, tol);
        r.merge(verify_pseudo_riemannian(c, h, lc.map(), tol, vo));
        r.artifacts["levi_civita"] = true;
        r.artifacts["eigenvalue"] = json_io::encode(lc.lambda);
        r.artifacts["connection"] = json_io::encode(ConnectionSpec{LambdaScalar{Complex{0.0, 0.0}}});
        return r;
    }

    if (!detect_alignment(c, tol)) throw UnsupportedError("levi-civita supports C^N, aligned (C^N)^n or free modules");
    AlignedMetric h = default_aligned_metric(c, tol);
    if (metric) {
        const auto* am = std::get_if<AlignedMetric>(&*metric);
        if (!am) throw UnsupportedError("module (C^N)^n needs an aligned metric");
        h = *am;
    }
    try {
        const AbelianLeviCivita lc = lc_abelian(c, h, tol);
        r.merge(verify_pseudo_riemannian(c, h, lc.map(), tol, vo));
        double lam = 0.0;
        for (const auto& v : lc.tensor.values) lam = std::max(lam, std::abs(v));
        r.residuals["lambda_tensor"] = lam;
        Json eig = Json::array();
        for (const auto& e : lc.eigenvalues) eig.push_back(json_io::encode(e));
        r.artifacts["levi_civita"] = true;
        r.artifacts["eigenvalues"] = eig;
        r.artifacts["connection"] = json_io::encode(ConnectionSpec{lc.tensor});
    } catch (const NoLeviCivitaError& e) {
        r.status = Status::fail;
        r.artifacts["levi_civita"] = false;
        r.artifacts["diagnosis"] = e.what();
    }
    return r;
}

Report cmd_koszul(const Options& o) {
    Report r{"koszul"};
    const Tolerance tol = tolerance(o);
    const FreeCalculusInstance f = json_io::decode_free_instance(json_io::read_file(o.instance));
    const auto metric = load_metric(o.metric);
    if (!metric || !std::holds_alternative<FreeMetric>(*metric)) {
        throw ArgumentError("koszul needs --metric with kind \"free\"");
    }
    const auto& h = std::get<FreeMetric>(*metric);
    const std::size_t n = f.dim();
    Json k = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json plane = Json::array();
        for (std::size_t j = 0; j < n; ++j) {
            Json line = Json::array();
            for (std::size_t l = 0; l < n; ++l) line.push_back(json_io::encode(koszul_rhs(f, h, i, j, l)));
            plane.push_back(std::move(line));
        }
        k.push_back(std::move(plane));
    }
    r.artifacts["koszul_rhs"] = k;
    const Christoffel gamma = christoffel_free(f, h, tol);
    r.merge(verify_pseudo_riemannian(f, h, gamma, tol, VerifyOptions{16, o.seed}));
    r.artifacts["connection"] = json_io::encode(ConnectionSpec{gamma});
    return r;
}

Report cmd_project(const Options& o) {
    Report r{"project"};
    const Tolerance tol = tolerance(o);
    const CalculusInstance c = load_instance(o.instance);
    require_consistent_shapes(c);
    if (!require_valid_calculus(c, tol, r)) return r;
    const auto metric = load_metric(o.metric);
    const SplitRealization s = build_split_realization(c, tol);

    FreeMetric lifted;
    HermitianModule direct;
    ConnectionMap lc;
    if (is_1d_cn(c)) {
        const ScalarMetric h = scalar_metric_or_default(metric);
        lifted = lift_metric(s, h);
        direct = hermitian_module(c, h);
        if (lc_exists_1d(c, tol)) lc = lc_connection_1d(c, tol).map();
    } else {
        AlignedMetric h = default_aligned_metric(c, tol);
        if (metric) {
            const auto* am = std::get_if<AlignedMetric>(&*metric);
            if (!am) throw UnsupportedError("module (C^N)^n needs an aligned metric");
            h = *am;
        }
        lifted = lift_metric(s, h);
        direct = hermitian_module(c, h);
        if (c.rep.lie.is_abelian(tol.eps)) {
            try {
                lc = lc_abelian(c, h, tol).map();
            } catch (const NoLeviCivitaError&) {
            }
        }
    }

    const double idem = s.P.idempotence_residual();
    r.residuals["idempotence"] = idem;
    if (idem > tol.threshold(1.0)) r.status = Status::fail;

    const bool orthogonal = is_orthogonal_projection(s.P, lifted, tol);
    r.artifacts["orthogonal"] = orthogonal;
    if (!orthogonal) {
        r.status = Status::fail;
        return r;
    }
    const auto restricted = restrict_metric(s.P, lifted, tol);
    double metric_residual = 0.0;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        for (std::size_t j = 0; j < c.dim(); ++j) {
            const ComplexMatrix d = direct.form(direct.generators[i], direct.generators[j]);
            metric_residual = std::max(metric_residual, max_abs(ComplexMatrix(restricted[i][j] - d)));
        }
    }
    r.residuals["restricted_metric"] = metric_residual;
    if (metric_residual > tol.threshold(max_abs(lifted.assemble()))) r.status = Status::fail;

    const bool symmetric = metric_symmetry_condition(s.P, lifted, tol);
    r.artifacts["metric_symmetry_condition"] = symmetric;
    if (!symmetric) r.status = Status::fail;

    const Christoffel ambient = christoffel_free(s.free, lifted, tol);
    const Christoffel projected = project_connection(s.P, ambient, s.free);
    const ConnectionMap pmap = projected_connection_map(s.P, ambient, c.rep);
    const ValidationReport pv =
        verify_pseudo_riemannian(c.rep, projected_module(s.P, lifted), pmap, tol, VerifyOptions{16, o.seed});
    if (const auto m = pv.find("metric")) {
        r.residuals["projected.metric"] = m->residual;
        if (!m->passed) r.status = Status::fail;
    }

    if (lc) {
        std::mt19937_64 rng(o.seed);
        std::normal_distribution<double> g;
        double agree = 0.0;
        double scale = 0.0;
        const auto N = static_cast<Eigen::Index>(c.N());
        for (int t = 0; t < 8; ++t) {
            ComplexMatrix v(static_cast<Eigen::Index>(c.module_rank), N);
            for (Eigen::Index e = 0; e < v.size(); ++e) v(e) = Complex{g(rng), g(rng)};
            for (std::size_t i = 0; i < c.dim(); ++i) {
                const ComplexMatrix via_p = pmap(i, theta_coefficients(s, v));
                const ComplexMatrix via_lc = theta_coefficients(s, lc(i, v));
                agree = std::max(agree, max_abs(ComplexMatrix(via_p - via_lc)));
                scale = std::max({scale, max_abs(via_p), max_abs(via_lc)});
            }
        }
        r.residuals["levi_civita_agreement"] = agree;
        if (agree > tol.threshold(scale)) r.status = Status::fail;
    }
    r.artifacts["levi_civita_exists"] = static_cast<bool>(lc);
    r.artifacts["projection"] = json_io::encode(s.P);
    r.artifacts["A"] = json_io::encode(s.A);
    r.artifacts["alphas"] = s.alphas;
    r.artifacts["lifted_metric"] = json_io::encode(Metric{lifted});
    r.artifacts["projected_connection"] = json_io::encode(ConnectionSpec{projected});
    return r;
}

Report cmd_verify(const Options& o) {
    Report r{"verify"};
    const Tolerance tol = tolerance(o);
    const VerifyOptions vo{16, o.seed};
    const auto any = json_io::decode_any_instance(json_io::read_file(o.instance));
    const auto metric = load_metric(o.metric);
    if (!metric) throw ArgumentError("verify needs --metric");
    const auto connection_json = json_io::read_file(o.connection);

    if (const auto* f = std::get_if<FreeCalculusInstance>(&any)) {
        const auto* h = std::get_if<FreeMetric>(&*metric);
        const ConnectionSpec spec = json_io::decode_connection(connection_json, f->N());
        const auto* gamma = std::get_if<Christoffel>(&spec);
        if (!h || !gamma) throw UnsupportedError("free calculi need a free metric and Christoffel symbols");
        r.merge(verify_pseudo_riemannian(*f, *h, *gamma, tol, vo));
        return r;
    }

    const auto& c = std::get<CalculusInstance>(any);
    require_consistent_shapes(c);
    const ConnectionSpec spec = json_io::decode_connection(connection_json, c.N());
    if (const auto* ls = std::get_if<LambdaScalar>(&spec)) {
        const auto* h = std::get_if<ScalarMetric>(&*metric);
        if (!h || !is_1d_cn(c)) throw UnsupportedError("lambda_scalar connections need C^N and a scalar metric");
        r.merge(verify_pseudo_riemannian(c, *h, connection_on_CN_map(c, ls->lambda), tol, vo));
        return r;
    }
    if (const auto* lt = std::get_if<LambdaTensor>(&spec)) {
        const auto* h = std::get_if<AlignedMetric>(&*metric);
        if (!h) throw UnsupportedError("lambda_tensor connections need an aligned metric");
        const Alignment al{h->v0, h->alphas};
        r.merge(verify_pseudo_riemannian(c, *h, lambda_tensor_map(c, al, *lt), tol, vo));
        return r;
    }
    throw UnsupportedError("Christoffel symbols need a free calculus");
}

// --- driver ------------------------------------------------------------------------

void print_summary(const Report& r, std::ostream& err) {
    err << r.command << ": " << status_name(r.status) << '\n';
    if (!r.error.empty()) err << "  " << r.error << '\n';
    for (const auto& [name, value] : r.residuals.items()) err << "  " << name << " = " << value.dump() << '\n';
    for (const char* key : {"diagnosis", "failure", "zero_pattern", "classes", "count"}) {
        if (r.artifacts.contains(key)) err << "  " << key << ": " << r.artifacts[key].dump() << '\n';
    }
}

int exit_code(Status s) { return s == Status::pass ? kPass : kFail; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Real calculi over matrix algebras: classification, isomorphisms and Levi-Civita connections",
                 "realcalc"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--tol", o.tol, "comparison tolerance eps")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "seed for randomized checks and searches");
    app.add_flag("--json-only", o.json_only, "suppress the human-readable summary");

    auto* validate = app.add_subcommand("validate", "validate a calculus instance");
    validate->add_option("instance", o.instance)->required();

    auto* classify = app.add_subcommand("classify", "canonical form and class of a 1-d calculus");
    classify->add_option("instance", o.instance)->required();

    auto* count = app.add_subcommand("count", "number of isomorphism classes for k eigenvalues");
    count->add_option("--k", o.k)->required();
    count->add_flag("--anti", o.anti, "spectrum symmetric under negation");

    auto* enumerate = app.add_subcommand("enumerate", "list class representatives");
    enumerate->add_option("--k", o.k)->required();
    enumerate->add_flag("--anti", o.anti, "spectrum symmetric under negation");

    auto* iso = app.add_subcommand("iso", "decide or verify isomorphism of two calculi");
    iso->add_option("a", o.instance)->required();
    iso->add_option("b", o.instance_b)->required();
    iso->add_option("--witness", o.witness, "JSON witness {U, psi, X}");
    iso->add_option("--budget", o.budget, "trial budget of the witness search");

    auto* lc = app.add_subcommand("levi-civita", "Levi-Civita connection or the reason it does not exist");
    lc->add_option("instance", o.instance)->required();
    lc->add_option("--metric", o.metric);

    auto* koszul = app.add_subcommand("koszul", "Koszul right-hand sides and Christoffel symbols of a free calculus");
    koszul->add_option("instance", o.instance)->required();
    koszul->add_option("--metric", o.metric)->required();

    auto* project = app.add_subcommand("project", "realize a calculus as a projection of a free one");
    project->add_option("instance", o.instance)->required();
    project->add_option("--metric", o.metric);

    auto* verify = app.add_subcommand("verify", "check the pseudo-Riemannian conditions for a connection");
    verify->add_option("instance", o.instance)->required();
    verify->add_option("--metric", o.metric)->required();
    verify->add_option("--connection", o.connection)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    }

    Report report;
    int code = kPass;
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        if (command == "validate") report = cmd_validate(o);
        else if (command == "classify") report = cmd_classify(o);
        else if (command == "count") report = cmd_count(o);
        else if (command == "enumerate") report = cmd_enumerate(o);
        else if (command == "iso") report = cmd_iso(o);
        else if (command == "levi-civita") report = cmd_levi_civita(o);
        else if (command == "koszul") report = cmd_koszul(o);
        else if (command == "project") report = cmd_project(o);
        else report = cmd_verify(o);
        code = exit_code(report.status);
    } catch (const Error& e) {
        report = Report{command, Status::fail};
        report.error = e.what();
        if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ArgumentError*>(&e)) {
            code = kInputError;
        } else if (dynamic_cast<const UnsupportedError*>(&e) || dynamic_cast<const ShapeError*>(&e) ||
                   dynamic_cast<const ResourceError*>(&e)) {
            code = kUnsupported;
        } else {
            code = kFail;
        }
    }
    out << to_json(report).dump(2) << '\n';
    if (!o.json_only) print_summary(report, err);
    return code;
}

}  // namespace realcalc::cli
