#include "biset/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <json.hpp>

#include "biset/error.hpp"
#include "biset/io.hpp"
#include "biset/kernels.hpp"
#include "biset/motions.hpp"
#include "biset/pdecheck.hpp"
#include "biset/recovery.hpp"
#include "biset/symmetry.hpp"

namespace biset::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Outcome {
    json report;
    bool pass = false;
};

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const auto at = s.find(sep, start);
        parts.push_back(s.substr(start, at == s.npos ? s.npos : at - start));
        if (at == s.npos) return parts;
        start = at + 1;
    }
}

double parse_real(std::string_view s, const std::string& what) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw UsageError("bad number '" + std::string(s) + "' for " + what);
    }
    return v;
}

std::vector<double> parse_reals(std::string_view s, std::size_t count, const std::string& what) {
    const auto parts = split(s, ',');
    if (parts.size() != count) {
        throw UsageError(what + " expects " + std::to_string(count) + " comma-separated numbers");
    }
    std::vector<double> out;
    for (auto p : parts) out.push_back(parse_real(p, what));
    return out;
}

MetricFunction make_metric(const RunConfig& c) {
    if (!c.metric_general.empty()) {
        std::map<std::string, std::string, std::less<>> parts;
        for (auto kv : split(c.metric_general, ',')) {
            const auto eq = kv.find('=');
            if (eq == kv.npos) throw UsageError("--metric-general entries must be key=name");
            parts[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
        }
        for (const char* key : {"chi", "phi", "psi1", "psi2"}) {
            if (!parts.count(key)) throw UsageError(std::string("--metric-general is missing ") + key);
        }
        if (parts.size() != 4) throw UsageError("--metric-general takes exactly chi, phi, psi1, psi2");
        return general_form_metric(univariate::from_name(parts["chi"]),
                                   univariate::from_name(parts["phi"]),
                                   bivariate::from_name(parts["psi1"]),
                                   bivariate::from_name(parts["psi2"]));
    }
    if (c.metric == "canonical") return canonical_metric();
    return expression_metric(c.metric);
}

json stats_json(const SeriesStats& s) { return {{"max", s.max}, {"median", s.median}}; }

json header(const RunConfig& c, double tol) {
    return {{"schema", "biset." + c.subcommand + "/" + std::to_string(kSchemaVersion)},
            {"command", c.subcommand},
            {"seed", c.seed},
            {"tol", tol}};
}

json range_json(const ProbeRange& r) { return json::array({r.lo, r.hi}); }

double tolerance(const RunConfig& c) { return c.tol.value_or(default_tolerance(c.subcommand)); }

// Where |φ'/φ + σ/τ| or |ψ'/φ − 1/τ| exceeds this, (φ, ψ) is not a solution.
constexpr double kCharacteristicTol = 1e-8;

// identity / minors ---------------------------------------------------------

struct IdentitySeries {
    std::vector<double> ps, relation1, relation2, product;
    std::size_t undefined = 0;
};

IdentitySeries identity_series(const RunConfig& c, const MetricFunction& f) {
    ProbeSampler sampler(c.seed, c.range);
    const auto corteges = sampler.corteges(c.samples);
    IdentitySeries out;
    for (const auto& s : identity_samples(f, corteges, Exec::Parallel)) {
        if (!s) {
            ++out.undefined;
            continue;
        }
        out.ps.push_back(s->ps);
        out.relation1.push_back(s->relation1);
        out.relation2.push_back(s->relation2);
        out.product.push_back(s->product);
    }
    return out;
}

Outcome run_identity(const RunConfig& c) {
    const double tol = tolerance(c);
    const MetricFunction f = make_metric(c);
    const IdentitySeries s = identity_series(c, f);
    const auto ps = summarize(s.ps);
    const auto r1 = summarize(s.relation1);
    const auto r2 = summarize(s.relation2);
    json r = header(c, tol);
    r["metric"] = f.description();
    r["samples"] = c.samples;
    r["range"] = range_json(c.range);
    r["evaluated"] = s.ps.size();
    r["undefined"] = s.undefined;
    r["ps_residual"] = stats_json(ps);
    r["relation1_residual"] = stats_json(r1);
    r["relation2_residual"] = stats_json(r2);
    r["product_identity_residual"] = stats_json(summarize(s.product));
    const bool pass = !s.ps.empty() && ps.max <= tol && r1.max <= tol && r2.max <= tol;
    r["verdict"] = pass;
    return {std::move(r), pass};
}

Outcome run_minors(const RunConfig& c) {
    const double tol = tolerance(c);
    const MetricFunction f = make_metric(c);
    const IdentitySeries s = identity_series(c, f);
    const auto r1 = summarize(s.relation1);
    const auto r2 = summarize(s.relation2);
    const auto product = summarize(s.product);
    json r = header(c, tol);
    r["metric"] = f.description();
    r["samples"] = c.samples;
    r["range"] = range_json(c.range);
    r["evaluated"] = s.relation1.size();
    r["undefined"] = s.undefined;
    r["relation1_residual"] = stats_json(r1);
    r["relation2_residual"] = stats_json(r2);
    r["product_identity_residual"] = stats_json(product);
    const bool pass = !s.relation1.empty() && r1.max <= tol && r2.max <= tol;
    r["verdict"] = pass;
    return {std::move(r), pass};
}

// rank ----------------------------------------------------------------------

Outcome run_rank(const RunConfig& c) {
    const double tol = tolerance(c);
    const MetricFunction f = make_metric(c);
    ProbeSampler sampler(c.seed, c.range);
    const auto corteges = sampler.corteges(c.samples);
    const auto samples = rank_samples(f, corteges, tol, Exec::Parallel);

    std::map<int, std::size_t> histogram;
    std::size_t undefined = 0;
    json detail = json::array();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!samples[i]) {
            ++undefined;
            continue;
        }
        ++histogram[samples[i]->rank];
        if (detail.size() < c.detail) {
            detail.push_back({{"index", i},
                              {"rank", samples[i]->rank},
                              {"singular_values", samples[i]->singular_values}});
        }
    }
    json hist = json::object();
    for (const auto& [rank, n] : histogram) hist[std::to_string(rank)] = n;
    const int max_rank = histogram.empty() ? 0 : histogram.rbegin()->first;

    json r = header(c, tol);
    r["metric"] = f.description();
    r["samples"] = c.samples;
    r["range"] = range_json(c.range);
    r["undefined"] = undefined;
    r["rank_histogram"] = hist;
    r["max_rank"] = max_rank;
    r["rank6_count"] = histogram.count(6) ? histogram[6] : 0;
    r["detail"] = detail;
    const bool pass = !histogram.empty() && max_rank <= 5;
    r["verdict"] = pass;
    return {std::move(r), pass};
}

// motions -------------------------------------------------------------------

double rel_err(double u, double v) {
    return std::abs(u - v) / std::max({1.0, std::abs(u), std::abs(v)});
}

double motion_err(const Motion& m1, const Motion& m2) {
    return std::max(rel_err(m1.a(), m2.a()), rel_err(m1.b(), m2.b()));
}

double invariance_rel(const Motion& m, const Point3& p) {
    return std::abs(invariance_residual(m, p)) / (1.0 + std::abs(p.x * p.xi) + std::abs(p.eta));
}

Outcome run_motions(const RunConfig& c) {
    if (!c.apply && c.verify == 0) throw UsageError("motions needs --apply a,b or --verify N");
    if (c.apply && !c.point) throw UsageError("--apply needs --point x,xi,eta");
    const double tol = tolerance(c);
    json r = header(c, tol);
    bool pass = true;
    if (c.apply) {
        const Motion m(c.apply->first, c.apply->second);
        const Point3 image = motion_apply(m, *c.point);
        const double residual = invariance_residual(m, *c.point);
        r["motion"] = {{"a", m.a()}, {"b", m.b()}};
        r["point"] = {c.point->x, c.point->xi, c.point->eta};
        r["image"] = {image.x, image.xi, image.eta};
        r["invariance_residual"] = residual;
        pass = pass && invariance_rel(m, *c.point) <= tol;
    }
    if (c.verify > 0) {
        ProbeSampler sampler(c.seed, c.range);
        auto motion = [&] {
            const double a = sampler.coordinate();
            return Motion(a, sampler.coordinate());
        };
        double assoc = 0, ident = 0, inverse = 0, invariance = 0;
        for (std::size_t n = 0; n < c.verify; ++n) {
            const Motion m1 = motion(), m2 = motion(), m3 = motion();
            const Point3 p{sampler.coordinate(), sampler.coordinate(), sampler.coordinate()};
            assoc = std::max(assoc, motion_err(motion_compose(motion_compose(m3, m2), m1),
                                               motion_compose(m3, motion_compose(m2, m1))));
            ident = std::max({ident, motion_err(motion_compose(m1, Motion::identity()), m1),
                              motion_err(motion_compose(Motion::identity(), m1), m1)});
            inverse = std::max({inverse,
                                motion_err(motion_compose(m1, motion_inverse(m1)), Motion::identity()),
                                motion_err(motion_compose(motion_inverse(m1), m1), Motion::identity())});
            invariance = std::max(invariance, invariance_rel(m1, p));
        }
        r["verify"] = {{"draws", c.verify},
                       {"range", range_json(c.range)},
                       {"associativity", assoc},
                       {"identity", ident},
                       {"inverse", inverse},
                       {"invariance", invariance}};
        pass = pass && std::max({assoc, ident, inverse, invariance}) <= tol;
    }
    r["verdict"] = pass;
    return {std::move(r), pass};
}

// pde -----------------------------------------------------------------------

Outcome run_pde(const RunConfig& c) {
    const double tol = tolerance(c);
    const UnivariateFn chi = univariate::from_name(c.chi);
    const auto points = random_points(c.samples, c.seed, c.range);
    json r = header(c, tol);
    r["case"] = c.pde_case;
    r["chi"] = chi.name();
    r["samples"] = c.samples;
    r["range"] = range_json(c.range);

    std::vector<double> eq1, eq2;
    std::size_t undefined = 0;
    double equivalence = 0.0;
    std::optional<MetricFunction> metric;
    bool characteristics_ok = true;

    if (c.pde_case == "a0") {
        metric = case_a0_solution(chi);
        const auto system = case_a0_system();
        std::vector<Point3> defined;
        for (const auto& p : points) {
            try {
                const auto res = linear_system_residual(*metric, system, p.x, p.xi, p.eta);
                eq1.push_back(res[0].normalized());
                eq2.push_back(res[1].normalized());
                defined.push_back(p);
            } catch (const DomainError&) {
                ++undefined;
            }
        }
        equivalence = equivalence_to_canonical(*metric, case_a0_change(chi), defined);
    } else if (c.pde_case == "anonzero") {
        const UnivariateFn sigma = univariate::from_name(c.sigma);
        const UnivariateFn tau = univariate::from_name(c.tau);
        std::optional<Characteristics> ch;
        if (c.phi.empty() != c.psi.empty()) throw UsageError("give both --phi and --psi, or neither");
        if (c.phi.empty()) {
            ch = integrate_characteristics(sigma, tau, 0.0, 1.0, 0.0, -c.range.hi, c.range.hi);
        } else {
            ch = Characteristics{univariate::from_name(c.phi), univariate::from_name(c.psi)};
        }
        std::vector<double> vs;
        for (const auto& p : points) vs.push_back(p.eta);
        const AnonzeroCase sol = case_anonzero_solution(chi, ch->phi, ch->psi, sigma, tau, vs);
        metric = sol.metric;
        std::vector<double> characteristic;
        std::vector<Point3> defined;
        for (std::size_t n = 0; n < points.size(); ++n) {
            const auto& cr = sol.characteristic[n];
            const double worst = std::max(std::abs(cr[0]), std::abs(cr[1]));
            characteristic.push_back(worst);
            if (worst > kCharacteristicTol) continue;
            try {
                const auto res = system15_residual(*metric, sigma, tau, points[n].x, points[n].xi,
                                                   points[n].eta);
                eq1.push_back(res[0].normalized());
                eq2.push_back(res[1].normalized());
                defined.push_back(points[n]);
            } catch (const DomainError&) {
                ++undefined;
            }
        }
        r["sigma"] = sigma.name();
        r["tau"] = tau.name();
        r["phi"] = ch->phi.name();
        r["psi"] = ch->psi.name();
        const auto sc = summarize(characteristic);
        r["characteristic_residual"] = stats_json(sc);
        characteristics_ok = sc.max <= kCharacteristicTol;
        equivalence = equivalence_to_canonical(*metric, case_anonzero_change(chi, ch->phi, ch->psi),
                                               defined);
    } else {
        throw UsageError("--case must be a0 or anonzero");
    }

    // Canonical equivalence implies the ps determinant vanishes on corteges.
    ProbeSampler sampler(c.seed + 1, c.range);
    std::vector<double> ps;
    for (const auto& cortege : sampler.corteges(std::min<std::size_t>(c.samples, 1000))) {
        try {
            ps.push_back(ps_check(*metric, cortege).normalized());
        } catch (const DomainError&) {
        }
    }
    const auto s1 = summarize(eq1);
    const auto s2 = summarize(eq2);
    const auto sp = summarize(ps);
    r["metric"] = metric->description();
    r["evaluated"] = eq1.size();
    r["undefined"] = undefined;
    r["equation1_residual"] = stats_json(s1);
    r["equation2_residual"] = stats_json(s2);
    r["equivalence_residual"] = equivalence;
    r["ps_residual"] = stats_json(sp);
    const bool pass = characteristics_ok && !eq1.empty() && s1.max <= tol && s2.max <= tol &&
                      equivalence <= tol && sp.max <= tol;
    r["verdict"] = pass;
    return {std::move(r), pass};
}

// tables --------------------------------------------------------------------

json coords_json(const Coordinates& c) {
    auto vec = [](const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    json j = {{"x", vec(c.x)}, {"xi", vec(c.xi)}, {"eta", vec(c.eta)}};
    if (c.gauge) {
        j["gauge"] = {{"convention", c.gauge->convention}, {"pivot_index", c.gauge->pivot_index}};
    }
    return j;
}

MeasurementTable load_input(const RunConfig& c) {
    if (c.input.empty()) throw UsageError(c.subcommand + " needs --input <table.csv|table.json>");
    return read_table_file(c.input);
}

struct Generated {
    MeasurementTable table;
    Coordinates truth;
};

Generated generate(const RunConfig& c) {
    if (c.p < 1 || c.q < 1) throw UsageError("--p and --q must be positive");
    if (!(c.noise >= 0.0)) throw UsageError("--noise must be non-negative");
    Coordinates truth = random_coordinates(c.p, c.q, c.seed, c.range);
    const bool canonical = c.metric_general.empty() && c.metric == "canonical";
    if (canonical) return {generate_table(truth, c.noise, c.seed + 1), truth};
    Matrix values = generate_metric_table(make_metric(c), truth).values();
    if (c.noise > 0.0) {
        Coordinates zero{Vector::Zero(values.rows()), Vector::Zero(values.cols()),
                         Vector::Zero(values.cols()), std::nullopt};
        values += generate_table(zero, c.noise, c.seed + 1).values();
    }
    return {MeasurementTable(std::move(values)), truth};
}

Outcome run_detect(const RunConfig& c) {
    const double tol = tolerance(c);
    const MeasurementTable t = load_input(c);
    const DetectReport d = detect_ps(t, tol, c.seed);
    json r = header(c, tol);
    r["input"] = c.input;
    r["rows"] = t.rows();
    r["cols"] = t.cols();
    r["max_residual"] = d.max_residual;
    r["median_residual"] = d.median_residual;
    r["corteges_checked"] = d.corteges_checked;
    r["sampled"] = d.sampled;
    r["verdict"] = d.verdict;
    return {std::move(r), d.verdict};
}

Outcome run_recover(const RunConfig& c) {
    const MeasurementTable t = load_input(c);
    const Recovery rec = recover_coordinates(t);
    json r = header(c, c.tol.value_or(0.0));
    if (!c.tol) r.erase("tol");
    r["input"] = c.input;
    const json coords = coords_json(rec.coords);
    for (auto it = coords.begin(); it != coords.end(); ++it) r[it.key()] = it.value();
    r["residual"] = rec.residual;
    const bool pass = !c.tol || rec.residual <= *c.tol;
    r["verdict"] = pass;
    return {std::move(r), pass};
}

// output --------------------------------------------------------------------

void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
    } else if (j.is_string()) {
        out.emplace_back(prefix, j.get<std::string>());
    } else {
        out.emplace_back(prefix, j.dump());
    }
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

void write_report(const json& report, Format format, std::ostream& out) {
    switch (format) {
        case Format::Json:
            out << report.dump(2) << '\n';
            return;
        case Format::Text: {
            std::vector<std::pair<std::string, std::string>> rows;
            flatten(report, "", rows);
            for (const auto& [k, v] : rows) out << k << ": " << v << '\n';
            return;
        }
        case Format::Csv: {
            std::vector<std::pair<std::string, std::string>> rows;
            flatten(report, "", rows);
            for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << csv_cell(rows[i].first);
            out << '\n';
            for (std::size_t i = 0; i < rows.size(); ++i) out << (i ? "," : "") << csv_cell(rows[i].second);
            out << '\n';
            return;
        }
    }
}

template <class Writer>
void with_output(const RunConfig& c, std::ostream& out, Writer write) {
    if (c.output.empty()) {
        write(out);
        return;
    }
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw IoError(c.output + ": cannot open for writing");
    write(file);
    if (!file) throw IoError(c.output + ": write failed");
}

int run_generate(const RunConfig& c, std::ostream& out) {
    const Generated g = generate(c);
    if (!c.coords_out.empty()) {
        std::ofstream file(c.coords_out, std::ios::binary);
        if (!file) throw IoError(c.coords_out + ": cannot open for writing");
        file << coords_json(g.truth).dump(2) << '\n';
    }
    const Format format = c.format.value_or(Format::Csv);
    with_output(c, out, [&](std::ostream& o) {
        if (format == Format::Csv) {
            write_table_csv(o, g.table);
            return;
        }
        const Matrix& v = g.table.values();
        json rows = json::array();
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            std::vector<double> row(static_cast<std::size_t>(v.cols()));
            for (Eigen::Index a = 0; a < v.cols(); ++a) row[static_cast<std::size_t>(a)] = v(i, a);
            rows.push_back(row);
        }
        json doc = {{"schema", "biset.generate/" + std::to_string(kSchemaVersion)}, {"values", rows}};
        write_report(doc, format, o);
    });
    return kPass;
}

}  // namespace

double default_tolerance(const std::string& subcommand) {
    if (subcommand == "motions") return 1e-12;
    if (subcommand == "pde") return 1e-7;
    return 1e-9;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        apply_thread_env();
        if (c.samples == 0) throw UsageError("--samples must be positive");
        if (c.tol && !(*c.tol > 0.0)) throw UsageError("--tol must be positive");
        if (c.subcommand == "generate") return run_generate(c, out);

        Outcome o;
        if (c.subcommand == "identity") o = run_identity(c);
        else if (c.subcommand == "minors") o = run_minors(c);
        else if (c.subcommand == "rank") o = run_rank(c);
        else if (c.subcommand == "motions") o = run_motions(c);
        else if (c.subcommand == "pde") o = run_pde(c);
        else if (c.subcommand == "detect") o = run_detect(c);
        else if (c.subcommand == "recover") o = run_recover(c);
        else throw UsageError("unknown subcommand '" + c.subcommand + "'");

        with_output(c, out, [&](std::ostream& s) { write_report(o.report, c.format.value_or(Format::Json), s); });
        return o.pass ? kPass : kFail;
    } catch (const Error& e) {
        err << "biset " << c.subcommand << ": " << e.what() << '\n';
        return kUsage;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Phenomenologically symmetric two-set geometry of rank (3,2): checks, ranks, motions, recovery"};
    app.require_subcommand(1, 1);

    std::string range, apply, point, format, config;
    std::optional<double> tol;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "RNG seed");
        sub->add_option("--tol", tol, "verdict tolerance (subcommand default when omitted)");
        sub->add_option("--output,-o", c.output, "write the report to a file instead of stdout");
        sub->add_option("--format", format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--config", config, "JSON config with metric, samples, seed, tol, range");
    };
    auto probes = [&](CLI::App* sub) {
        sub->add_option("--samples", c.samples, "number of random corteges or points");
        sub->add_option("--range", range, "probe magnitude interval lo,hi (default 0.1,2)");
    };
    auto metric = [&](CLI::App* sub) {
        sub->add_option("--metric", c.metric, "`canonical` or an expression in x, xi, eta");
        sub->add_option("--metric-general", c.metric_general,
                        "general form chi=..,phi=..,psi1=..,psi2=.. from the function catalog");
    };

    auto* identity = app.add_subcommand("identity", "ps determinant and sixth-order relations over random corteges");
    auto* rank = app.add_subcommand("rank", "ranks and singular values of the 7x6 functional matrix");
    auto* minors = app.add_subcommand("minors", "sixth-order relation residuals and the minor product identity");
    auto* motions = app.add_subcommand("motions", "apply motions and verify the group laws");
    auto* pde = app.add_subcommand("pde", "residuals of the reduced PDE systems for the case solutions");
    auto* gen = app.add_subcommand("generate", "emit a synthetic measurement table as CSV");
    auto* detect = app.add_subcommand("detect", "test a measurement table for the rank-(3,2) law");
    auto* recover = app.add_subcommand("recover", "recover hidden coordinates from a measurement table");

    for (auto* sub : {identity, rank, minors, motions, pde, gen, detect, recover}) common(sub);
    for (auto* sub : {identity, rank, minors, pde, motions, gen}) probes(sub);
    for (auto* sub : {identity, rank, minors, gen}) metric(sub);
    rank->add_option("--detail", c.detail, "per-sample entries to list");

    motions->add_option("--apply", apply, "motion a,b");
    motions->add_option("--point", point, "point x,xi,eta");
    motions->add_option("--verify", c.verify, "randomized group-law sweep size");

    pde->add_option("--case", c.pde_case, "a0 | anonzero")->check(CLI::IsMember({"a0", "anonzero"}));
    pde->add_option("--chi", c.chi, "outer scaling from the catalog");
    pde->add_option("--sigma", c.sigma, "sigma(eta) for anonzero");
    pde->add_option("--tau", c.tau, "tau(eta) for anonzero");
    pde->add_option("--phi", c.phi, "phi(eta) for anonzero (integrated when omitted)");
    pde->add_option("--psi", c.psi, "psi(eta) for anonzero (integrated when omitted)");

    gen->add_option("--p", c.p, "rows (M-points)");
    gen->add_option("--q", c.q, "columns (N-points)");
    gen->add_option("--noise", c.noise, "Gaussian noise sigma");
    gen->add_option("--coords-out", c.coords_out, "write the generating coordinates as JSON");

    for (auto* sub : {detect, recover}) sub->add_option("--input,-i", c.input, "table.csv or table.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kPass : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    c.subcommand = sub->get_name();
    try {
        if (!config.empty()) {
            std::ifstream in(config);
            if (!in) throw IoError(config + ": cannot open for reading");
            json j;
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw IoError(config + ": invalid JSON: " + e.what());
            }
            auto unset = [&](const char* flag) {
                try {
                    return sub->count(flag) == 0;
                } catch (const CLI::OptionNotFound&) {
                    return false;
                }
            };
            try {
                if (j.contains("metric") && unset("--metric")) c.metric = j["metric"].get<std::string>();
                if (j.contains("metric_general") && unset("--metric-general")) {
                    c.metric_general = j["metric_general"].get<std::string>();
                }
                if (j.contains("samples") && unset("--samples")) c.samples = j["samples"].get<std::size_t>();
                if (j.contains("seed") && unset("--seed")) c.seed = j["seed"].get<std::uint64_t>();
                if (j.contains("tol") && unset("--tol")) tol = j["tol"].get<double>();
                if (j.contains("range") && unset("--range")) {
                    const auto rr = j["range"].get<std::vector<double>>();
                    if (rr.size() != 2) throw UsageError("config range must be [lo, hi]");
                    c.range = {rr[0], rr[1]};
                }
                if (j.contains("input") && unset("--input")) c.input = j["input"].get<std::string>();
            } catch (const json::exception& e) {
                throw IoError(config + ": " + e.what());
            }
        }
        c.tol = tol;
        if (!range.empty()) {
            const auto v = parse_reals(range, 2, "--range");
            c.range = {v[0], v[1]};
        }
        if (!(c.range.lo >= 0.0 && c.range.hi > c.range.lo)) {
            throw UsageError("--range must satisfy 0 <= lo < hi");
        }
        if (!apply.empty()) {
            const auto v = parse_reals(apply, 2, "--apply");
            c.apply = std::pair{v[0], v[1]};
        }
        if (!point.empty()) {
            const auto v = parse_reals(point, 3, "--point");
            c.point = Point3{v[0], v[1], v[2]};
        }
        if (format == "json") c.format = Format::Json;
        else if (format == "csv") c.format = Format::Csv;
        else if (format == "text") c.format = Format::Text;
    } catch (const Error& e) {
        err << "biset " << c.subcommand << ": " << e.what() << '\n';
        return kUsage;
    }
    return run(c, out, err);
}

}  // namespace biset::cli
