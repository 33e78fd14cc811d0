#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "fmmi/bsc.hpp"
#include "fmmi/relative.hpp"
#include "fmmi/simulator.hpp"
#include "fmmi/weighting.hpp"

namespace fmmi::cli {

using nlohmann::json;

namespace {

double num(const json& j, const char* key) {
    if (!j.contains(key)) throw std::invalid_argument(std::string("missing key: ") + key);
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument(std::string("not a number: ") + key);
    return v.get<double>();
}

double num_or(const json& j, const char* key, double def) { return j.contains(key) ? num(j, key) : def; }

int int_or(const json& j, const char* key, int def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number_integer()) throw std::invalid_argument(std::string("not an integer: ") + key);
    return j.at(key).get<int>();
}

Channel parse_channel(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("channel must be a nonempty array of rows");
    std::vector<std::vector<double>> rows;
    for (const auto& r : j) {
        if (!r.is_array()) throw std::invalid_argument("channel row must be an array");
        std::vector<double> row;
        for (const auto& v : r) {
            if (!v.is_number()) throw std::invalid_argument("channel entry must be a number");
            row.push_back(v.get<double>());
        }
        rows.push_back(Pmf(std::move(row)).probs());
    }
    return Channel(std::move(rows));
}

std::string header(const RunConfig& c, const std::vector<std::string>& extra_comments, const std::string& cols) {
    std::ostringstream os;
    os << "# fmmi " << kVersion << " config_hash=" << c.hash() << "\n";
    for (const auto& e : extra_comments) os << "# " << e << "\n";
    os << cols << "\n";
    return os.str();
}

class Row {
public:
    Row& operator<<(double v) { return add(fmt(v)); }
    Row& operator<<(const std::string& s) { return add(s); }
    Row& operator<<(const char* s) { return add(s); }
    Row& operator<<(bool b) { return add(b ? "1" : "0"); }
    Row& operator<<(std::uint64_t v) { return add(std::to_string(v)); }
    Row& operator<<(int v) { return add(std::to_string(v)); }
    std::string str() const { return s_ + "\n"; }

private:
    Row& add(const std::string& x) {
        if (!first_) s_ += ",";
        s_ += x;
        first_ = false;
        return *this;
    }
    std::string s_;
    bool first_ = true;
};

int points(const RunConfig& c, const json& sec, int def) {
    int n = c.grid > 0 ? c.grid : int_or(sec, "points", def);
    if (n < 2) throw std::invalid_argument("grid must have at least 2 points");
    return n;
}

const json& section(const RunConfig& c, const char* name) {
    static const json empty = json::object();
    return c.raw.contains(name) ? c.raw.at(name) : empty;
}

std::vector<std::string> member_labels(const CompoundClass& W, const std::vector<double>& rhos) {
    std::vector<std::string> out;
    if (W.is_bsc()) {
        for (double r : rhos) out.push_back("rho=" + fmt(r));
    } else {
        for (size_t i = 0; i < W.size(); ++i) out.push_back("ch" + std::to_string(i));
    }
    return out;
}

ProblemSpec spec_of(const RunConfig& c) {
    if (c.alpha) return ProblemSpec::with_alpha(c.R, c.pX, c.W, *c.alpha);
    if (c.delta) return ProblemSpec::with_delta(c.R, c.pX, c.W, *c.delta);
    throw std::invalid_argument("config needs alpha or delta");
}

WeightFn decoder_F(const RunConfig& c, const json& d) {
    const double H = entropy(c.pX);
    const std::string F = d.value("F", std::string("optimal_list"));
    if (F == "optimal_list") return optimal_F_list(spec_of(c));
    if (F == "optimal_single") return optimal_F_single(spec_of(c));
    if (F == "identity") return WeightFn::identity(c.R, H);
    if (F == "threshold") return WeightFn::threshold(num(d, "delta"), c.R, H);
    if (F == "ck") return WeightFn::ck(num(d, "delta"), num(d, "lambda"), c.R, H);
    if (F == "knots") {
        auto t = d.at("t").get<std::vector<double>>();
        auto f = d.at("f").get<std::vector<double>>();
        return WeightFn(std::move(t), std::move(f), WeightFn::Kind::custom);
    }
    throw std::invalid_argument("unknown F: " + F);
}

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string RunConfig::hash() const {
    std::string s = raw.dump() + "|seed=" + std::to_string(seed) + "|grid=" + std::to_string(grid) +
                    "|tnats=" + (t_nats ? "1" : "0");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    RunConfig c;
    c.raw = j;
    c.R = num(j, "rate");
    if (!(c.R >= 0.0)) throw std::invalid_argument("rate must be >= 0");
    if (!j.contains("class")) throw std::invalid_argument("missing key: class");
    const auto& cl = j.at("class");
    if (cl.contains("bsc")) {
        const auto& b = cl.at("bsc");
        c.W = CompoundClass::bsc_interval(num(b, "rho_min"), num(b, "rho_max"));
    } else if (cl.contains("channels")) {
        std::vector<Channel> chans;
        for (const auto& ch : cl.at("channels")) chans.push_back(parse_channel(ch));
        c.W = CompoundClass::explicit_list(std::move(chans));
    } else {
        throw std::invalid_argument("class needs 'bsc' or 'channels'");
    }
    if (j.contains("input")) c.pX = Pmf(j.at("input").get<std::vector<double>>());
    else c.pX = Pmf::uniform(c.W.inputs());
    if (c.pX.size() != c.W.inputs()) throw std::invalid_argument("input size does not match channel inputs");
    if (j.contains("alpha")) c.alpha = num(j, "alpha");
    if (j.contains("delta")) c.delta = num(j, "delta");
    if (c.alpha && c.delta) throw std::invalid_argument("give alpha or delta, not both");
    if (c.alpha && *c.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (j.contains("lambda")) c.lambda = num(j, "lambda");
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw std::invalid_argument("seed must be an unsigned integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.t_nats = j.value("t_nats", false);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

std::string cmd_esp(const RunConfig& c) {
    const auto& sec = section(c, "esp");
    const int n = points(c, sec, 101);
    const CompoundExponent ce(c.pX, c.W);
    std::vector<double> rhos;
    if (c.W.is_bsc()) {
        rhos = {c.W.rho_min()};
        if (c.W.rho_max() > c.W.rho_min()) rhos.push_back(c.W.rho_max());
    }
    std::vector<Channel> chans = c.W.channels();
    if (c.W.is_bsc())
        for (double r : rhos) chans.push_back(Channel::bsc(r));
    std::vector<SpherePacking> sps;
    double rmax = 0.0;
    for (auto& ch : chans) {
        sps.emplace_back(c.pX, ch);
        rmax = std::max(rmax, sps.back().mutual_info());
    }
    const double r0 = num_or(sec, "r_min", 0.0), r1 = num_or(sec, "r_max", rmax);
    if (!(r1 > r0) || r0 < 0.0) throw std::invalid_argument("esp needs 0 <= r_min < r_max");

    auto labels = member_labels(c.W, rhos);
    std::string cols = "R";
    for (const auto& l : labels) cols += ",esp[" + l + "]";
    cols += ",esp_compound,slope";
    std::ostringstream os;
    const auto cr = characteristic_rates(ce);
    os << header(c, {"r_inf=" + fmt(cr.r_inf) + " i_min=" + fmt(cr.i_min) + " r_cr=" + fmt(cr.r_cr)}, cols);

    std::vector<double> rs(n);
    for (int i = 0; i < n; ++i) rs[i] = r0 + (r1 - r0) * i / (n - 1);
    for (double r : rs) {
        Row row;
        row << r;
        for (const auto& sp : sps) row << sp.value(r);
        double slope;
        if (r >= cr.i_min) slope = 0.0;
        else if (r <= cr.r_inf) slope = std::nan("");
        else slope = ce.slopes(r).value();
        row << ce.value(r) << slope;
        os << row.str();
    }
    return os.str();
}

std::string cmd_optimal_f(const RunConfig& c) {
    const auto& sec = section(c, "optimal_f");
    const int n = points(c, sec, 201);
    const auto spec = spec_of(c);
    const auto FR = f_R_builder(c.R, spec.ce);
    const auto FL = optimal_F_list(spec);
    const auto FS = optimal_F_single(spec);
    const double H = spec.input_entropy();
    std::ostringstream os;
    os << header(c, {"R=" + fmt(c.R) + " delta=" + fmt(spec.delta) + " alpha=" + fmt(spec.alpha) +
                         (FR.degenerate ? " F_R degenerate (R >= I_min)" : "")},
                 "t,F_R,F_list,F_single,Finv_list_pos");
    auto ts = WeightFn::grid(c.R, H, n, {0.0});
    for (double t : ts) {
        Row row;
        row << t << FR.F(t) << FL(t) << FS(t) << std::max(FL.inverse(t), 0.0);
        os << row.str();
    }
    return os.str();
}

std::string cmd_tradeoff(const RunConfig& c) {
    const auto& sec = section(c, "tradeoff");
    const int n = points(c, sec, 41);
    const CompoundExponent ce(c.pX, c.W);
    const double iMin = ce.mutual_info(), H = entropy(c.pX);
    const double eR = ce.value(c.R);
    const bool above = c.R >= iMin;

    double dlo = above ? 0.0 : std::max(ce.rate_infinity() - c.R, -eR);
    double dhi = above ? H : iMin - c.R;
    dlo = num_or(sec, "delta_min", dlo);
    dhi = num_or(sec, "delta_max", dhi);
    if (!(dhi >= dlo)) throw std::invalid_argument("tradeoff needs delta_min <= delta_max");

    std::optional<double> dconj;
    if (!above) {
        auto conj = conjugate_rate(c.R, ce);
        dconj = conj ? std::max(*conj - c.R, 0.0) : 0.0;
    }
    std::vector<std::pair<double, std::string>> deltas;
    for (int i = 0; i < n; ++i) deltas.push_back({dlo + (dhi - dlo) * i / (n - 1), ""});
    if (dconj && *dconj >= dlo && *dconj <= dhi) deltas.push_back({*dconj, "conj"});
    if (!above && iMin - c.R >= dlo && iMin - c.R <= dhi) deltas.push_back({iMin - c.R, "imin"});
    std::stable_sort(deltas.begin(), deltas.end(), [](auto& a, auto& b) { return a.first < b.first; });
    // Merge duplicates, keeping the annotation.
    std::vector<std::pair<double, std::string>> rows;
    for (auto& d : deltas) {
        if (!rows.empty() && std::abs(d.first - rows.back().first) < 1e-12) {
            if (!d.second.empty()) rows.back().second = d.second;
            continue;
        }
        rows.push_back(d);
    }

    std::ostringstream os;
    std::vector<std::string> notes = {"R=" + fmt(c.R) + " esp(R)=" + fmt(eR) + " i_min=" + fmt(iMin)};
    if (dconj) notes.push_back("boundary delta_conj=" + fmt(*dconj) + " delta_max=" + fmt(iMin - c.R));
    os << header(c, notes,
                 "delta,alpha,E_i,E_erase,regime,flagged,lambda_lo,lambda_hi,universal,universal_at_lambda,mark");
    for (const auto& [d, mark] : rows) {
        const auto spec = ProblemSpec::with_delta(c.R, c.pX, c.W, d);
        ExponentPair op;
        if (above) {
            op = exponent_pair(c.R, spec.ce, WeightFn::threshold(d, c.R, H));
            op.regime = Regime::threshold;
        } else {
            op = optimal_exponents(spec);
        }
        double llo = std::nan(""), lhi = std::nan("");
        bool uni = false;
        std::string uniAt = "nan";
        if (!above) {
            if (op.regime == Regime::regime_I) {
                if (auto lr = ck_lambda_range(spec)) {
                    llo = lr->lo;
                    lhi = lr->hi;
                }
            }
            const auto rep = universality_check(spec, d, c.lambda.value_or(std::nan("")));
            uni = d >= rep.delta_lo - 1e-9 && d <= rep.delta_hi + 1e-9 && rep.lambda_lo <= rep.lambda_hi + 1e-9;
            if (c.lambda) uniAt = rep.universal ? "1" : "0";
        }
        Row row;
        row << d << spec.alpha << op.E_i << op.E_erase << to_string(op.regime) << op.flagged << llo << lhi << uni
            << uniAt << mark;
        os << row.str();
    }
    return os.str();
}

std::string cmd_simulate(const RunConfig& c) {
    const auto& sec = section(c, "simulate");
    sim::SimConfig cfg;
    if (sec.contains("channel")) cfg.channel = parse_channel(sec.at("channel"));
    else if (sec.contains("rho")) cfg.channel = Channel::bsc(num(sec, "rho"));
    else cfg.channel = c.W.min_members().front();
    cfg.pX = c.pX;
    cfg.R = c.R;
    cfg.seed = c.seed;
    if (!sec.contains("trials") || !sec.at("trials").is_number_integer() || sec.at("trials").get<long long>() < 1)
        throw std::invalid_argument("simulate.trials must be an integer >= 1");
    cfg.trials = sec.at("trials").get<std::uint64_t>();
    if (!sec.contains("blocklengths")) throw std::invalid_argument("missing key: simulate.blocklengths");
    cfg.blocklengths = sec.at("blocklengths").get<std::vector<int>>();
    cfg.channel_known = sec.value("channel_known", false);

    const json dec = sec.value("decoder", json::object());
    const std::string kind = dec.value("kind", std::string("fmmi"));
    const double H = entropy(c.pX);
    std::optional<WeightFn> theoryF;
    if (kind == "fmmi") {
        cfg.decoder = sim::Decoder::fmmi(decoder_F(c, dec));
        theoryF = cfg.decoder.F;
    } else if (kind == "mmi") {
        cfg.decoder = sim::Decoder::mmi();
        theoryF = WeightFn::identity(c.R, H);
    } else if (kind == "ck") {
        cfg.decoder = sim::Decoder::ck(num(dec, "delta"), num(dec, "lambda"));
        theoryF = WeightFn::ck(cfg.decoder.delta, cfg.decoder.lambda, c.R, H);
    } else if (kind == "forney") {
        const double T = num(dec, "T");
        const std::string v = dec.value("variant", std::string("sum"));
        if (v != "sum" && v != "max2") throw std::invalid_argument("forney variant must be sum or max2");
        cfg.decoder = sim::Decoder::forney(c.t_nats ? T : T * std::log(2.0),
                                           v == "sum" ? sim::ForneyVariant::sum : sim::ForneyVariant::max2);
    } else {
        throw std::invalid_argument("unknown decoder kind: " + kind);
    }
    cfg.validate();

    const auto res = sim::run_experiment(cfg);
    double tEi = std::nan(""), tEe = std::nan("");
    if (theoryF) {
        auto p = exponent_pair_for_channel(c.R, c.pX, cfg.channel, *theoryF);
        tEi = p.E_i;
        tEe = p.E_erase;
    }
    std::ostringstream os;
    os << header(c,
                 {"decoder=" + kind + " trials=" + std::to_string(cfg.trials) + " seed=" + std::to_string(cfg.seed),
                  "emp_exp_* are -slope of log2(rate) vs N over blocklengths with a nonzero count"},
                 "N,M,rate_eff,trials,correct,erasure,erasure_lo,erasure_hi,undetected,undetected_lo,undetected_hi,"
                 "miss,miss_lo,miss_hi,mean_ni,mean_ni_lo,mean_ni_hi,max_list,"
                 "emp_exp_miss,emp_exp_ni,emp_exp_erasure,emp_exp_undetected,theory_E_i,theory_E_erase");
    for (const auto& b : res.blocks) {
        Row row;
        row << b.N << b.M << b.rate_eff << b.tally.trials << b.tally.correct << b.erasure.value << b.erasure.lo
            << b.erasure.hi << b.undetected.value << b.undetected.lo << b.undetected.hi << b.miss.value << b.miss.lo
            << b.miss.hi << b.mean_ni.value << b.mean_ni.lo << b.mean_ni.hi << b.tally.max_list << res.exp_miss
            << res.exp_ni << res.exp_erasure << res.exp_undetected << tEi << tEe;
        os << row.str();
    }
    return os.str();
}

std::pair<std::string, std::string> cmd_relative(const RunConfig& c) {
    const auto& sec = section(c, "relative");
    const int n = points(c, sec, 201);
    const bool endpoints = sec.value("endpoints_only", false);
    const int members = int_or(sec, "members", 201);
    const double delta = c.delta.value_or(0.0);

    ReferenceFunctional aref = ReferenceFunctional::forney(delta);
    const json ref = sec.value("reference", json("forney"));
    if (ref.is_string()) {
        const auto k = ref.get<std::string>();
        if (k == "constant") aref = ReferenceFunctional::constant(num_or(sec, "value", c.alpha.value_or(delta)));
        else if (k != "forney") throw std::invalid_argument("unknown reference: " + k);
    } else if (ref.is_object()) {
        aref = ReferenceFunctional::table(ref.at("alpha").get<std::vector<double>>(),
                                          ref.value("beta", std::vector<double>{}));
    } else {
        throw std::invalid_argument("reference must be a string or an object");
    }

    const RelativeModel model(c.R, c.pX, c.W, aref, members, endpoints);
    std::vector<double> rhos;
    if (c.W.is_bsc()) rhos = endpoints ? std::vector<double>{c.W.rho_min(), c.W.rho_max()} : c.W.grid_rhos(members);
    const auto labels = member_labels(c.W, rhos);

    const auto spec = c.alpha ? ProblemSpec::with_alpha(c.R, c.pX, c.W, *c.alpha)
                              : ProblemSpec::with_delta(c.R, c.pX, c.W, delta);
    const auto Fmm = optimal_F_list(spec);
    const auto Frel = model.rel_optimal_F();
    const double H = entropy(c.pX);

    std::ostringstream os;
    os << header(c, {"R=" + fmt(c.R) + " delta=" + fmt(delta) + " members=" + std::to_string(model.members().size())},
                 "t,minimax_F,relative_F,noisiest,cleanest");
    for (double t : WeightFn::grid(c.R, H, n, {0.0})) {
        Row row;
        const size_t noisy = model.argmin_member_esp(c.R + std::max(t, 0.0));
        const size_t clean = model.argmax_member_F(std::max(t, 0.0)).first;
        row << t << Fmm(t) << Frel(t) << labels.at(noisy) << labels.at(clean);
        os << row.str();
    }

    std::ostringstream pc;
    pc << header(c, {"per-channel exponents under the relative optimal F"},
                 "member,alpha,beta,esp_R,E_i,E_i_minus_alpha,E_erase,E_erase_minus_beta");
    for (size_t i = 0; i < model.members().size(); ++i) {
        const auto& sp = model.members()[i];
        const double ei = erf(c.R, sp, Frel), ee = erf_inverse(c.R, sp, Frel);
        Row row;
        row << labels.at(i) << model.alpha(i) << model.beta(i) << sp.value(c.R) << ei << ei - model.alpha(i) << ee
            << ee - model.beta(i);
        pc << row.str();
    }
    return {os.str(), pc.str()};
}

std::string cmd_bsc_report(const RunConfig& c) {
    if (!c.W.is_bsc()) throw std::invalid_argument("bsc-report needs a bsc class");
    const double R = c.R, rmin = c.W.rho_min(), rmax = c.W.rho_max();
    const auto reg = bsc::universality_region_bsc(R, rmin, rmax);
    std::ostringstream os;
    os << header(c, {}, "key,value");
    auto kv = [&](const std::string& k, double v) { os << k << "," << fmt(v) << "\n"; };
    kv("rho_min", rmin);
    kv("rho_max", rmax);
    kv("mu_max", bsc::mu_of(rmin));
    kv("mu_min", bsc::mu_of(rmax));
    kv("capacity_rho_max", bsc::capacity(rmax));
    kv("R", R);
    kv("rho_R", bsc::rho_R(R));
    kv("mu_R", bsc::mu_R(R));
    kv("esp_R", bsc::esp_bsc(R, rmax));
    kv("esp_prime_R", bsc::esp_prime_bsc(R, rmax));
    kv("rcr", bsc::rcr_bsc(rmax));
    auto conj = bsc::conjugate_bsc(R, rmax);
    kv("conj_R", conj ? *conj : std::nan(""));
    kv("delta_lo", reg.delta_range.lo);
    kv("delta_hi", reg.delta_range.hi);
    kv("nonempty", reg.nonempty ? 1.0 : 0.0);
    if (c.delta) {
        const auto lr = reg.lambda_range(*c.delta);
        kv("delta", *c.delta);
        kv("lambda_lo", lr.lo);
        kv("lambda_hi", lr.hi);
        kv("lambda_opt", reg.lambda_opt(*c.delta));
        kv("lambda_nonempty", reg.lambda_nonempty(*c.delta) ? 1.0 : 0.0);
    }
    return os.str();
}

void write_atomic(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::invalid_argument("cannot write " + tmp);
        out << text;
        out.flush();
        if (!out) throw std::invalid_argument("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

int run(int argc, char** argv) {
    CLI::App app{"Optimal erasure/list exponents for the F-MMI decoder over compound DMCs"};
    app.require_subcommand(1);
    std::string config, out;
    std::uint64_t seed = 0;
    int grid = 0;
    bool tnats = false;

    const char* names[] = {"esp", "optimal-f", "tradeoff", "simulate", "relative", "bsc-report"};
    const char* help[] = {
        "E_sp table per channel and for the class",
        "optimal weighting functions on the t grid",
        "Delta sweep of the optimal exponent pair, lambda range and universality",
        "Monte Carlo decoding run",
        "minimax vs relative-minimax weighting functions",
        "closed-form BSC quantities",
    };
    for (int i = 0; i < 6; ++i) {
        auto* sc = app.add_subcommand(names[i], help[i]);
        sc->add_option("--config", config, "JSON config file")->required();
        sc->add_option("--out", out, "output CSV path (stdout if omitted)");
        sc->add_option("--seed", seed, "RNG seed, overrides the config");
        sc->add_option("--grid", grid, "grid points, overrides the config");
        sc->add_flag("--t-nats", tnats,
                     "Forney T is in nats (the e^{NT} form); otherwise bits, converted by T*ln 2");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kConfigError;
    }

    try {
        RunConfig c = load_config(config);
        for (auto* sc : app.get_subcommands())
            if (sc->count("--seed")) c.seed = seed;
        if (grid != 0) c.grid = grid;
        if (tnats) c.t_nats = true;

        std::string text, extra;
        if (app.got_subcommand("esp")) text = cmd_esp(c);
        else if (app.got_subcommand("optimal-f")) text = cmd_optimal_f(c);
        else if (app.got_subcommand("tradeoff")) text = cmd_tradeoff(c);
        else if (app.got_subcommand("simulate")) text = cmd_simulate(c);
        else if (app.got_subcommand("relative")) std::tie(text, extra) = cmd_relative(c);
        else if (app.got_subcommand("bsc-report")) text = cmd_bsc_report(c);

        if (out.empty()) {
            std::cout << text;
            if (!extra.empty()) std::cout << "\n" << extra;
        } else {
            write_atomic(out, text);
            if (!extra.empty()) write_atomic(out + ".channels.csv", extra);
        }
        return kOk;
    } catch (const GuardError& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kGuardError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumericalError;
    }
}

}  // namespace fmmi::cli
