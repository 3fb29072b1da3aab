#include "dgauss/prob.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "dgauss/errors.hpp"

namespace dgauss::prob {

namespace {

constexpr std::size_t kSampleBlock = 65536;
constexpr double kConvolutionCap = 1e6;

long parse_long(const std::string& token, const std::string& where) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ValidationError(where + ": '" + token + "' is not an integer");
    }
    return value;
}

double parse_double(const std::string& token, const std::string& where) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != token.size() || token.empty()) throw ValidationError(where + ": '" + token + "' is not a number");
    return value;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

Pmf from_points(const std::vector<std::pair<long, double>>& points, const std::string& where) {
    if (points.empty()) throw ValidationError(where + ": empty support");
    std::set<long> seen;
    long lo = points.front().first, hi = lo;
    for (const auto& [m, w] : points) {
        if (!seen.insert(m).second) throw ValidationError(where + ": point " + std::to_string(m) + " repeated");
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (static_cast<double>(hi) - static_cast<double>(lo) > kConvolutionCap) {
        throw ResourceError(where + ": support wider than 10^6");
    }
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [m, w] : points) probs[static_cast<std::size_t>(m - lo)] = w;
    return Pmf::make(lo, std::move(probs));
}

std::pair<std::uint32_t, std::uint32_t> halves(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32)};
}

std::mt19937_64 block_stream(std::uint64_t seed, std::size_t block) {
    const auto [lo, hi] = halves(seed);
    const auto [blo, bhi] = halves(static_cast<std::uint64_t>(block));
    std::seed_seq seq{lo, hi, blo, bhi};
    return std::mt19937_64(seq);
}

void check_sampling(const heat::WalkParams& params) {
    (void)heat::WalkParams::probability(params.p, params.q_w, params.t);
}

// c[k] = sum_i a[i] b[k-i]; each output index is independent.
std::vector<double> convolve_raw(const std::vector<double>& a, const std::vector<double>& b, bool parallel) {
    const long na = static_cast<long>(a.size());
    const long nb = static_cast<long>(b.size());
    const long nc = na + nb - 1;
    std::vector<double> c(static_cast<std::size_t>(nc), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (long k = 0; k < nc; ++k) {
        const long i0 = std::max(0L, k - nb + 1);
        const long i1 = std::min(na - 1, k);
        double acc = 0.0;
        for (long i = i0; i <= i1; ++i) acc += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(k - i)];
        c[static_cast<std::size_t>(k)] = acc;
    }
    return c;
}

Pmf convolve_impl(const Pmf& a, const Pmf& b, bool parallel) {
    const double width = static_cast<double>(a.probs().size()) + static_cast<double>(b.probs().size());
    if (width > kConvolutionCap) throw ResourceError("convolve: support wider than 10^6");
    return Pmf::make(a.min_support() + b.min_support(), convolve_raw(a.probs(), b.probs(), parallel));
}

} // namespace

Pmf Pmf::make(long min_support, std::vector<double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) throw ValidationError("pmf: probabilities must be finite and non-negative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "pmf: probabilities sum to " << total << ", not 1";
        throw ValidationError(msg.str());
    }
    std::size_t first = 0;
    while (probs[first] == 0.0) ++first;
    std::size_t last = probs.size() - 1;
    while (probs[last] == 0.0) --last;
    std::vector<double> tight(probs.begin() + static_cast<long>(first), probs.begin() + static_cast<long>(last) + 1);
    for (double& p : tight) p /= total;
    return Pmf(min_support + static_cast<long>(first), std::move(tight));
}

Pmf Pmf::uniform(const std::vector<long>& points) {
    std::vector<std::pair<long, double>> pts;
    for (long m : points) pts.emplace_back(m, 1.0 / static_cast<double>(points.size()));
    return from_points(pts, "uniform pmf");
}

Pmf Pmf::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ValidationError("pmf '" + text + "': expected uniform:... or points:...");
    const std::string kind = text.substr(0, colon);
    const auto items = split(text.substr(colon + 1), ',');
    const std::string where = "pmf '" + text + "'";
    if (kind == "uniform") {
        std::vector<long> pts;
        for (const auto& it : items) pts.push_back(parse_long(it, where));
        return uniform(pts);
    }
    if (kind == "points") {
        std::vector<std::pair<long, double>> pts;
        for (const auto& it : items) {
            const auto eq = it.find('=');
            if (eq == std::string::npos) throw ValidationError(where + ": expected m=p, got '" + it + "'");
            pts.emplace_back(parse_long(it.substr(0, eq), where), parse_double(it.substr(eq + 1), where));
        }
        return from_points(pts, where);
    }
    throw ValidationError(where + ": unknown kind '" + kind + "'");
}

Pmf Pmf::read(std::istream& in, const std::string& source) {
    std::vector<std::pair<long, double>> pts;
    std::string line;
    for (long lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string a, b, extra;
        if (!(fields >> a)) continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (!(fields >> b) || (fields >> extra)) throw ValidationError(where + ": expected 'integer probability'");
        pts.emplace_back(parse_long(a, where), parse_double(b, where));
    }
    return from_points(pts, source);
}

Pmf Pmf::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open pmf file " + path.string());
    return read(in, path.string());
}

double Pmf::at(long m) const {
    if (m < min_support_ || m > max_support()) return 0.0;
    return probs_[static_cast<std::size_t>(m - min_support_)];
}

double Pmf::mean() const {
    long double s = 0.0L;
    for (std::size_t i = 0; i < probs_.size(); ++i) s += static_cast<long double>(min_support_ + static_cast<long>(i)) * probs_[i];
    return static_cast<double>(s);
}

double Pmf::variance() const {
    const long double mu = mean();
    long double s = 0.0L;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const long double d = static_cast<long double>(min_support_ + static_cast<long>(i)) - mu;
        s += d * d * probs_[i];
    }
    return static_cast<double>(s);
}

double pmf_Y(const heat::WalkParams& params, long m) {
    check_sampling(params);
    return heat::kernel_pq(params, m);
}

std::complex<double> char_fn(const heat::WalkParams& params, double y) {
    const double rate = params.p + params.q_w;
    const double drift = params.p - params.q_w;
    const double modulus = std::exp(-rate * params.t * (1.0 - std::cos(y)));
    return std::polar(modulus, drift * params.t * std::sin(y));
}

Moments moments(const heat::WalkParams& params) {
    return Moments{(params.p - params.q_w) * params.t, (params.p + params.q_w) * params.t};
}

Sample sample_Y_detailed(const heat::WalkParams& params, std::mt19937_64& rng) {
    check_sampling(params);
    const double rate = (params.p + params.q_w) * params.t;
    if (rate == 0.0) return {};
    std::poisson_distribution<long> jumps(rate);
    const long n = jumps(rng);
    std::binomial_distribution<long> right(n, params.p / (params.p + params.q_w));
    const long r = right(rng);
    return Sample{2 * r - n, n};
}

long sample_Y(const heat::WalkParams& params, std::mt19937_64& rng) { return sample_Y_detailed(params, rng).value; }

std::vector<long> sample_Y_many(const heat::WalkParams& params, std::size_t count, std::uint64_t seed) {
    check_sampling(params);
    std::vector<long> out(count);
    const long blocks = static_cast<long>((count + kSampleBlock - 1) / kSampleBlock);
#pragma omp parallel for schedule(static)
    for (long b = 0; b < blocks; ++b) {
        auto rng = block_stream(seed, static_cast<std::size_t>(b));
        const std::size_t begin = static_cast<std::size_t>(b) * kSampleBlock;
        const std::size_t end = std::min(count, begin + kSampleBlock);
        for (std::size_t i = begin; i < end; ++i) out[i] = sample_Y(params, rng);
    }
    return out;
}

Pmf convolve(const Pmf& a, const Pmf& b) { return convolve_impl(a, b, true); }

namespace serial {

std::vector<long> sample_Y_many(const heat::WalkParams& params, std::size_t count, std::uint64_t seed) {
    check_sampling(params);
    std::vector<long> out;
    out.reserve(count);
    for (std::size_t b = 0; out.size() < count; ++b) {
        auto rng = block_stream(seed, b);
        for (std::size_t i = 0; i < kSampleBlock && out.size() < count; ++i) out.push_back(sample_Y(params, rng));
    }
    return out;
}

Pmf convolve(const Pmf& a, const Pmf& b) { return convolve_impl(a, b, false); }

} // namespace serial

Pmf convolve_n(const Pmf& base, long n) {
    if (n < 1) throw DomainError("convolve_n: n must be positive");
    const double width = static_cast<double>(n) * static_cast<double>(base.probs().size());
    if (width > kConvolutionCap) {
        throw ResourceError("convolve_n: n * support width = " + std::to_string(width) + " exceeds 10^6");
    }
    Pmf result = base;
    bool have = false;
    Pmf power = base;
    for (long k = n;;) {
        if (k & 1) {
            result = have ? convolve(result, power) : power;
            have = true;
        }
        k >>= 1;
        if (k == 0) break;
        power = convolve(power, power);
    }
    return result;
}

LatticeSpan lattice_span(const Pmf& base) {
    std::vector<long> support;
    for (std::size_t i = 0; i < base.probs().size(); ++i)
        if (base.probs()[i] > 0.0) support.push_back(base.min_support() + static_cast<long>(i));
    if (support.size() < 2) throw DegenerateError("lattice_span: support is a single point");
    long g = 0;
    for (long m : support) g = std::gcd(g, m - support.front());
    const long a = ((support.front() % g) + g) % g;
    return LatticeSpan{a, g};
}

heat::WalkParams llt_walk(const Pmf& base, long n) {
    const double mu = base.mean();
    const double var = base.variance();
    const double ratio = mu / var;
    return heat::WalkParams::make((1.0 + ratio) / 2.0, (1.0 - ratio) / 2.0, static_cast<double>(n) * var);
}

LltReport llt_discrepancy(const Pmf& base, long n) {
    if (n < 1) throw DomainError("llt_discrepancy: n must be positive");
    const LatticeSpan span = lattice_span(base);
    if (span.span != 1) {
        throw PreconditionError("llt_discrepancy: support lies in a progression with span " +
                                std::to_string(span.span) + "; the local limit needs span 1");
    }
    const double mu = base.mean();
    const double var = base.variance();
    if (!(var > std::fabs(mu))) {
        throw PreconditionError("llt_discrepancy: need variance > |mean|, got variance " + std::to_string(var) +
                                " and mean " + std::to_string(mu));
    }
    const Pmf law = convolve_n(base, n);
    const heat::WalkParams walk = llt_walk(base, n);
    const double nd = static_cast<double>(n);
    const double center = nd * mu;
    const double spread = std::sqrt(nd * var);
    const long lo = std::min(law.min_support(), static_cast<long>(std::floor(center - 10.0 * spread)));
    const long hi = std::max(law.max_support(), static_cast<long>(std::ceil(center + 10.0 * spread)));
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * nd * var);

    LltReport rep;
    rep.n = n;
    rep.argmax_m = lo;
    for (long m = lo; m <= hi; ++m) {
        const double exact = law.at(m);
        const double discrete = heat::kernel_pq(walk, m);
        const double z = static_cast<double>(m) - center;
        const double normal = norm * std::exp(-z * z / (2.0 * nd * var));
        const double d = std::fabs(exact - discrete);
        if (d > rep.sup_discrepancy_discrete) {
            rep.sup_discrepancy_discrete = d;
            rep.argmax_m = m;
        }
        rep.sup_discrepancy_continuous = std::max(rep.sup_discrepancy_continuous, std::fabs(exact - normal));
        rep.gap = std::max(rep.gap, std::fabs(discrete - normal));
    }
    const double root_n = std::sqrt(nd);
    rep.sup_discrepancy_discrete *= root_n;
    rep.sup_discrepancy_continuous *= root_n;
    rep.gap *= root_n;
    return rep;
}

ChiSquare chi_square_gof(const std::vector<long>& samples, const heat::WalkParams& params, long lo, long hi) {
    check_sampling(params);
    if (hi <= lo) throw DomainError("chi_square_gof: need lo < hi");
    if (samples.empty()) throw DomainError("chi_square_gof: no samples");
    const std::size_t bins = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> expected(bins, 0.0);
    std::vector<double> observed(bins, 0.0);
    double inner = 0.0;
    for (long m = lo + 1; m < hi; ++m) {
        expected[static_cast<std::size_t>(m - lo)] = pmf_Y(params, m);
        inner += expected[static_cast<std::size_t>(m - lo)];
    }
    // End bins absorb the tails: P(Y <= lo) and P(Y >= hi).
    double lower = 0.0;
    const long reach = heat::pq_tail_order(params, 1e-18) + std::abs(lo) + std::abs(hi);
    for (long m = lo; m >= -reach; --m) lower += pmf_Y(params, m);
    expected.front() = lower;
    expected.back() = std::max(0.0, 1.0 - inner - lower);
    for (long s : samples) observed[static_cast<std::size_t>(std::clamp(s, lo, hi) - lo)] += 1.0;

    const double total = static_cast<double>(samples.size());
    for (double& e : expected) e *= total;
    // Pool sparse bins inward from both ends.
    std::vector<double> e(expected.begin(), expected.end());
    std::vector<double> o(observed.begin(), observed.end());
    while (e.size() > 2 && e.front() < 5.0) {
        e[1] += e[0];
        o[1] += o[0];
        e.erase(e.begin());
        o.erase(o.begin());
    }
    while (e.size() > 2 && e.back() < 5.0) {
        e[e.size() - 2] += e.back();
        o[o.size() - 2] += o.back();
        e.pop_back();
        o.pop_back();
    }
    ChiSquare out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double d = o[i] - e[i];
        out.statistic += d * d / e[i];
    }
    out.dof = static_cast<long>(e.size()) - 1;
    out.p_value = boost::math::gamma_q(0.5 * static_cast<double>(out.dof), 0.5 * out.statistic);
    return out;
}

} // namespace dgauss::prob
