#include "dgauss/cli.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "dgauss/bessel.hpp"
#include "dgauss/errors.hpp"
#include "dgauss/graphs.hpp"
#include "dgauss/heat.hpp"
#include "dgauss/prob.hpp"
#include "dgauss/tori.hpp"
#include "dgauss/trig.hpp"
#include "dgauss/zeta.hpp"

namespace dgauss::cli {

namespace {

using Cell = std::variant<long, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("table row width mismatch");
        rows.push_back(std::move(row));
    }
};

// Thrown for bad flag values that CLI11 cannot see (ranges, lists, fractions).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_csv(const Table& t, std::ostream& out) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        out << format_double(v);
                    } else if constexpr (std::is_same_v<V, long>) {
                        out << v;
                    } else {
                        out << csv_escape(v);
                    }
                },
                row[i]);
        }
        out << "\n";
    }
}

void write_json(const Table& t, const nlohmann::ordered_json& meta, std::ostream& out) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    doc.push_back({{"meta", meta}});
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>) {
                        if (std::isfinite(v)) {
                            obj[t.columns[i]] = v;
                        } else {
                            obj[t.columns[i]] = nullptr;
                        }
                    } else {
                        obj[t.columns[i]] = v;
                    }
                },
                row[i]);
        }
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << "\n";
}

long to_long(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const long v = std::stol(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(flag + ": '" + s + "' is not an integer");
}

double to_double(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(flag + ": '" + s + "' is not a number");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

// "a..b" or "a,b,c" or "a".
std::vector<long> parse_int_list(const std::string& s, const std::string& flag) {
    if (const auto dots = s.find(".."); dots != std::string::npos) {
        const long lo = to_long(s.substr(0, dots), flag);
        const long hi = to_long(s.substr(dots + 2), flag);
        if (hi < lo) throw UsageError(flag + ": empty range '" + s + "'");
        if (hi - lo > 10000000) throw UsageError(flag + ": range '" + s + "' too long");
        std::vector<long> out;
        for (long x = lo; x <= hi; ++x) out.push_back(x);
        return out;
    }
    std::vector<long> out;
    for (const auto& p : split(s, ',')) out.push_back(to_long(p, flag));
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

std::vector<double> parse_real_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (const auto& p : split(s, ',')) out.push_back(to_double(p, flag));
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

trig::Beta parse_beta(const std::string& s) {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        return trig::Beta::from_fraction(to_long(s.substr(0, slash), "--beta"), to_long(s.substr(slash + 1), "--beta"));
    }
    return trig::Beta::from_value(to_double(s, "--beta"));
}

// A value that starts with '-' and a digit (e.g. "--x-range -10..10") would be
// taken for a short flag; glue it to the preceding long option instead.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) == 0 && a.find('=') == std::string::npos && i + 1 < args.size()) {
            const std::string& next = args[i + 1];
            if (next.size() > 1 && next[0] == '-' && (std::isdigit(static_cast<unsigned char>(next[1])) || next[1] == '.')) {
                out.push_back(a + "=" + next);
                ++i;
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

struct Common {
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out_path;
};

struct KernelOpts {
    std::string domain = "Z";
    double t = 1.0;
    std::string x_range = "0";
    double p = 0.5, q_w = 0.5;
    long n = 1;
    std::string side = "spectral";
    long tree_q = 2;
    std::string graph;
    long origin = 0;
};

struct SampleOpts {
    double p = 0.5, q_w = 0.5, t = 1.0;
    long count = 10;
    bool histogram = false;
};

struct LltOpts {
    std::string pmf, pmf_file, n = "16,64,256";
};

struct ZetaOpts {
    long tree_q = 1;
    std::string s = "0";
    double s_imag = 0.0;
    bool exact = false;
};

struct TrigOpts {
    long m = 1, r = 0;
    std::string beta = "1/2";
    std::string n = "1";
    bool exclude = false;
    long sin4 = 0;
};

struct TorusOpts {
    std::string d = "2";
    std::string n = "8,16,32,64";
    std::string dims;
};

nlohmann::ordered_json meta_for(const std::string& sub, const std::vector<std::string>& args, const Common& c) {
    nlohmann::ordered_json meta;
    meta["program"] = "dgauss";
    meta["version"] = kVersion;
    meta["subcommand"] = sub;
    meta["args"] = args;
    if (c.seed) {
        meta["seed"] = *c.seed;
    } else {
        meta["seed"] = nullptr;
    }
    meta["format"] = c.format;
    return meta;
}

Table run_kernel(const KernelOpts& o) {
    const auto xs = parse_int_list(o.x_range, "--x-range");
    Table t;
    if (o.domain == "Z") {
        t.columns = {"domain", "t", "x", "value"};
        const auto vals = heat::kernel_Z_table(o.t, xs.front(), xs.back());
        for (long x : xs) t.add({o.domain, o.t, x, vals[static_cast<std::size_t>(x - xs.front())]});
    } else if (o.domain == "pq") {
        t.columns = {"domain", "p", "q_w", "t", "x", "value"};
        const auto w = heat::WalkParams::make(o.p, o.q_w, o.t);
        for (long x : xs) t.add({o.domain, o.p, o.q_w, o.t, x, heat::kernel_pq(w, x)});
    } else if (o.domain == "circle") {
        if (o.side != "spectral" && o.side != "images") throw UsageError("--side: expected spectral or images");
        const auto side = o.side == "spectral" ? heat::CircleSide::spectral : heat::CircleSide::images;
        t.columns = {"domain", "n", "side", "t", "x", "value"};
        for (long x : xs) t.add({o.domain, o.n, o.side, o.t, x, heat::kernel_circle(o.n, o.t, x, side)});
    } else if (o.domain == "tree") {
        t.columns = {"domain", "q", "t", "r", "value"};
        const auto tp = heat::TreeParams::make(o.tree_q, o.t);
        for (long r : xs) t.add({o.domain, o.tree_q, o.t, r, heat::kernel_tree(tp, r)});
    } else if (o.domain == "graph") {
        if (o.graph.empty()) throw UsageError("--graph: required for --domain graph");
        const auto g = graphs::load_graph(o.graph);
        if (o.origin < 0) throw DomainError("--origin must be non-negative");
        const auto col = graphs::kernel_graph_column(g, static_cast<graphs::Vertex>(o.origin), o.t);
        t.columns = {"domain", "graph", "origin", "t", "x", "value"};
        for (long x : xs) {
            if (x < 0 || static_cast<std::size_t>(x) >= col.size()) {
                throw DomainError("vertex " + std::to_string(x) + " out of range");
            }
            t.add({o.domain, o.graph, o.origin, o.t, x, col[static_cast<std::size_t>(x)]});
        }
    } else {
        throw UsageError("--domain: expected Z, pq, circle, tree or graph, got '" + o.domain + "'");
    }
    return t;
}

Table run_sample(const SampleOpts& o, std::uint64_t seed) {
    const auto w = heat::WalkParams::probability(o.p, o.q_w, o.t);
    if (o.count < 1) throw UsageError("--count: must be positive");
    if (o.count > 100000000) throw ResourceError("--count: more than 10^8 samples");
    const auto draws = prob::sample_Y_many(w, static_cast<std::size_t>(o.count), seed);
    Table t;
    const long seed_cell = static_cast<long>(seed);
    if (o.histogram) {
        std::map<long, long> hist;
        for (long v : draws) ++hist[v];
        t.columns = {"seed", "p", "q_w", "t", "count", "m", "frequency", "pmf"};
        for (const auto& [m, c] : hist) t.add({seed_cell, o.p, o.q_w, o.t, o.count, m, c, prob::pmf_Y(w, m)});
    } else {
        t.columns = {"seed", "p", "q_w", "t", "index", "value"};
        for (std::size_t i = 0; i < draws.size(); ++i) t.add({seed_cell, o.p, o.q_w, o.t, static_cast<long>(i), draws[i]});
    }
    return t;
}

Table run_llt(const LltOpts& o) {
    if (o.pmf.empty() == o.pmf_file.empty()) throw UsageError("--pmf/--pmf-file: give exactly one");
    const prob::Pmf base = o.pmf.empty() ? prob::Pmf::load(o.pmf_file) : prob::Pmf::parse(o.pmf);
    const std::string label = o.pmf.empty() ? o.pmf_file : o.pmf;
    Table t;
    t.columns = {"pmf", "n", "sup_discrepancy_discrete", "sup_discrepancy_continuous", "gap", "argmax_m"};
    for (long n : parse_int_list(o.n, "--n")) {
        const auto rep = prob::llt_discrepancy(base, n);
        t.add({label, rep.n, rep.sup_discrepancy_discrete, rep.sup_discrepancy_continuous, rep.gap, rep.argmax_m});
    }
    return t;
}

Table run_zeta(const ZetaOpts& o) {
    Table t;
    t.columns = {"q", "s_re", "s_im", "value_re", "value_im", "method"};
    for (double s_re : parse_real_list(o.s, "--s")) {
        const zeta::cplx s(s_re, o.s_imag);
        const bool neg_int = o.s_imag == 0.0 && s_re <= 0.0 && std::nearbyint(s_re) == s_re;
        if (o.exact && neg_int) {
            const BigInt v = zeta::zeta_tree_neg_int(o.tree_q, static_cast<long>(-s_re));
            t.add({o.tree_q, s_re, o.s_imag, v.convert_to<double>(), 0.0, std::string("polynomial")});
            continue;
        }
        const auto pt = zeta::zeta_tree_point(o.tree_q, s);
        const std::string method = pt.method == zeta::Method::series ? "series" : "closed_form";
        t.add({o.tree_q, s_re, o.s_imag, pt.value.real(), pt.value.imag(), method});
    }
    return t;
}

Table run_trigsum(const TrigOpts& o) {
    Table t;
    if (o.sin4 > 0) {
        t.columns = {"k", "lhs", "rhs", "difference"};
        for (long k = 1; k <= o.sin4; ++k) {
            const auto r = trig::sin4_identity(k);
            t.add({k, r.lhs, r.rhs, r.lhs - r.rhs});
        }
        return t;
    }
    const trig::Beta beta = parse_beta(o.beta);
    const auto ns = parse_int_list(o.n, "--n");
    long max_n = 0;
    for (long n : ns) {
        if (n < 1) throw UsageError("--n: powers must be >= 1");
        max_n = std::max(max_n, n);
    }
    std::vector<std::complex<double>> gen;
    const bool with_gen = !beta.is_integer() && max_n <= 64;
    if (with_gen) gen = trig::generating_coeffs(o.m, o.r, beta, max_n);
    t.columns = {"m", "r", "beta", "n", "direct_re", "direct_im", "generating_re", "generating_im"};
    for (long n : ns) {
        const auto d = trig::trig_sum_direct({o.m, o.r, beta, n, o.exclude});
        const double nan = std::nan("");
        const auto g = with_gen ? gen[static_cast<std::size_t>(n - 1)] : std::complex<double>(nan, nan);
        t.add({o.m, o.r, o.beta, n, d.real(), d.imag(), g.real(), g.imag()});
    }
    return t;
}

Table run_torus(const TorusOpts& o) {
    Table t;
    if (!o.dims.empty()) {
        const auto spec = tori::TorusSpec::make(parse_int_list(o.dims, "--dims"));
        t.columns = {"dims", "vertices", "log_det"};
        t.add({o.dims, spec.volume(), tori::log_det_prime(spec)});
        return t;
    }
    t.columns = {"d", "n", "log_det", "density", "remainder"};
    for (long d : parse_int_list(o.d, "--d")) {
        if (d < 1 || d > 4) throw DomainError("--d: dimension must lie in [1, 4]");
        const double density = tori::lattice_density(static_cast<int>(d));
        for (long n : parse_int_list(o.n, "--n")) {
            const auto spec = tori::TorusSpec::cube(static_cast<int>(d), n);
            const double ld = tori::log_det_prime(spec);
            const double rem = ld - static_cast<double>(spec.volume()) * density - 2.0 * std::log(static_cast<double>(n));
            t.add({d, n, ld, density, rem});
        }
    }
    return t;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete Gaussian heat kernels, zeta functions and related sums", "dgauss"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "64-bit seed for stochastic subcommands");
        sub->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", common.out_path, "Write output to this path instead of stdout");
    };

    KernelOpts ko;
    auto* kernel = app.add_subcommand("kernel", "Tabulate heat kernels");
    kernel->add_option("--domain", ko.domain, "Z, pq, circle, tree or graph");
    kernel->add_option("--t", ko.t, "Time");
    kernel->add_option("--x-range", ko.x_range, "Sites: a..b, a,b,c or a");
    kernel->add_option("--p", ko.p, "Right rate (pq)");
    kernel->add_option("--q-w", ko.q_w, "Left rate (pq)");
    kernel->add_option("--n", ko.n, "Circle length");
    kernel->add_option("--side", ko.side, "spectral or images (circle)");
    kernel->add_option("--tree-q", ko.tree_q, "Tree branching q (degree q+1)");
    kernel->add_option("--graph", ko.graph, "Edge-list file (graph)");
    kernel->add_option("--origin", ko.origin, "Origin vertex (graph)");
    add_common(kernel);

    SampleOpts so;
    auto* sample = app.add_subcommand("sample", "Draw from the continuous-time walk");
    sample->add_option("--p", so.p, "Right rate");
    sample->add_option("--q-w", so.q_w, "Left rate");
    sample->add_option("--t", so.t, "Time");
    sample->add_option("--count", so.count, "Number of draws");
    sample->add_flag("--histogram", so.histogram, "Emit frequencies with the exact pmf");
    add_common(sample);

    LltOpts lo;
    auto* llt = app.add_subcommand("llt", "Local limit discrepancies of S_n");
    llt->add_option("--pmf", lo.pmf, "uniform:-1,0,1 or points:m=p,...");
    llt->add_option("--pmf-file", lo.pmf_file, "File of 'integer probability' lines");
    llt->add_option("--n", lo.n, "Sample sizes");
    add_common(llt);

    ZetaOpts zo;
    auto* zeta_cmd = app.add_subcommand("zeta", "Spectral zeta functions of Z and regular trees");
    zeta_cmd->add_option("--tree-q", zo.tree_q, "Tree branching q; 1 gives Z");
    zeta_cmd->add_option("--s", zo.s, "Real parts, comma separated");
    zeta_cmd->add_option("--s-imag", zo.s_imag, "Imaginary part shared by all points");
    zeta_cmd->add_flag("--exact", zo.exact, "Use the integer formula at non-positive integers");
    add_common(zeta_cmd);

    TrigOpts to;
    auto* trig_cmd = app.add_subcommand("trigsum", "Twisted trigonometric sums and their generating function");
    trig_cmd->add_option("--m", to.m, "Modulus");
    trig_cmd->add_option("--r", to.r, "Twist");
    trig_cmd->add_option("--beta", to.beta, "Shift, decimal or a/b");
    trig_cmd->add_option("--n", to.n, "Powers");
    trig_cmd->add_flag("--exclude-singular", to.exclude, "Drop terms where the sine vanishes");
    trig_cmd->add_option("--sin4", to.sin4, "Tabulate the sin^4 identity for k = 1..K instead");
    add_common(trig_cmd);

    TorusOpts tor;
    auto* torus = app.add_subcommand("torus", "Log-determinants of discrete tori");
    torus->add_option("--d", tor.d, "Dimensions");
    torus->add_option("--n", tor.n, "Side lengths");
    torus->add_option("--dims", tor.dims, "One rectangular torus, e.g. 3,4");
    add_common(torus);

    const auto args = glue_negative_values(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    try {
        Table table;
        if (chosen == kernel) {
            table = run_kernel(ko);
        } else if (chosen == sample) {
            if (!common.seed) throw UsageError("--seed: required for sample");
            table = run_sample(so, *common.seed);
        } else if (chosen == llt) {
            table = run_llt(lo);
        } else if (chosen == zeta_cmd) {
            table = run_zeta(zo);
        } else if (chosen == trig_cmd) {
            table = run_trigsum(to);
        } else {
            table = run_torus(tor);
        }
        std::ostringstream buf;
        if (common.format == "json") {
            write_json(table, meta_for(name, raw_args, common), buf);
        } else {
            write_csv(table, buf);
        }
        if (common.out_path.empty()) {
            out << buf.str();
        } else {
            std::ofstream file(common.out_path, std::ios::binary);
            if (!file) throw ResourceError("cannot write " + common.out_path);
            file << buf.str();
        }
        return kSuccess;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kDomainFailure;
    } catch (const ResourceError& e) {
        err << "resource error: " << e.what() << "\n";
        return kResourceFailure;
    }
}

} // namespace dgauss::cli
