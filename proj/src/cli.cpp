#include "attrarith/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "attrarith/attractor.hpp"
#include "attrarith/bigfloat.hpp"
#include "attrarith/bp_jacobian.hpp"
#include "attrarith/cohomology.hpp"
#include "attrarith/elliptic.hpp"
#include "attrarith/error.hpp"
#include "attrarith/flow.hpp"
#include "attrarith/modular.hpp"

namespace attrarith::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr Precision kMaxPrecision = Precision(1) << 20;

const std::set<std::string> kTabularCommands = {"hcp", "weber", "curve", "fermat", "flow"};

struct Envelope {
    Envelope() = default;
    explicit Envelope(std::string name) : command(std::move(name)) {}

    std::string command;
    json inputs = json::object();
    json result = json::object();
    json certificates = json::array();
    std::optional<std::string> csv;

    void certify(const std::string& name, const std::string& value, bool passed)
    {
        certificates.push_back({{"name", name}, {"value", value}, {"passed", passed}});
    }
};

struct Context {
    Precision prec = kDefaultPrecision;
    std::string warnings;

    void warn(const std::string& msg) { warnings += "warning: " + msg + "\n"; }
};

Error invalid(const std::string& msg)
{
    return Error(ErrorKind::InvalidArgument, msg);
}

std::string str(Int v)
{
    return std::to_string(v);
}

json str_list(const std::vector<Int>& v)
{
    json out = json::array();
    for (Int x : v)
        out.push_back(str(x));
    return out;
}

json triple(Int a, Int b, Int c)
{
    return json::array({str(a), str(b), str(c)});
}

std::string dec(const BigFloat& x, Precision prec)
{
    return x.with_precision(prec).to_string();
}

json dec(const BigComplex& z, Precision prec)
{
    return {{"re", dec(z.re(), prec)}, {"im", dec(z.im(), prec)}};
}

std::string dbl(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Int parse_int(std::string_view text, const std::string& what)
{
    Int v = 0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        throw invalid(what + ": expected an integer, got '" + std::string(text) + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(text);
    while (std::getline(is, cur, sep))
        out.push_back(cur);
    if (!text.empty() && text.back() == sep)
        out.emplace_back();
    return out;
}

std::vector<Int> parse_int_list(const std::string& text, const std::string& what)
{
    std::vector<Int> out;
    for (const auto& part : split(text, ','))
        out.push_back(parse_int(part, what));
    if (out.empty())
        throw invalid(what + ": empty list");
    return out;
}

std::pair<std::string, std::string> split_pair(const std::string& text, const std::string& what)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2)
        throw invalid(what + ": expected RE,IM, got '" + text + "'");
    return {parts[0], parts[1]};
}

BigComplex parse_big_complex(const std::string& text, Precision prec, const std::string& what)
{
    const auto [re, im] = split_pair(text, what);
    try {
        return {BigFloat(re, prec), BigFloat(im, prec)};
    } catch (const Error&) {
        throw invalid(what + ": malformed number in '" + text + "'");
    }
}

double parse_double(const std::string& text, const std::string& what)
{
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
        throw invalid(what + ": malformed number '" + text + "'");
    return v;
}

std::complex<double> parse_complex(const std::string& text, const std::string& what)
{
    const auto [re, im] = split_pair(text, what);
    return {parse_double(re, what), parse_double(im, what)};
}

IntVector to_vector(const std::vector<Int>& v)
{
    IntVector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        out(static_cast<Eigen::Index>(i)) = v[i];
    return out;
}

IntMatrix read_gram(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw invalid("cannot read Gram matrix file '" + path + "'");
    std::vector<std::vector<Int>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::vector<Int> row;
        std::string tok;
        while (ls >> tok)
            row.push_back(parse_int(tok, "Gram entry"));
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw invalid("Gram matrix file '" + path + "' is empty");
    IntMatrix g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw invalid("Gram matrix rows have different lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return g;
}

struct ChargeOptions {
    std::string p2, q2, pq, gram, p, q;
    CLI::Option* p2_opt = nullptr;
    CLI::Option* q2_opt = nullptr;
    CLI::Option* pq_opt = nullptr;
    CLI::Option* gram_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* q_opt = nullptr;

    void attach(CLI::App* sub, bool lattice)
    {
        p2_opt = sub->add_option("--p2", p2, "p.p");
        q2_opt = sub->add_option("--q2", q2, "q.q");
        pq_opt = sub->add_option("--pq", pq, "p.q");
        if (!lattice)
            return;
        gram_opt = sub->add_option("--gram", gram, "file holding an integer Gram matrix, one row per line");
        p_opt = sub->add_option("--p", p, "comma-separated p vector");
        q_opt = sub->add_option("--q", q, "comma-separated q vector");
    }

    bool lattice() const { return gram_opt && gram_opt->count() > 0; }

    ChargeData resolve(json& inputs) const
    {
        if (lattice()) {
            if (!p_opt->count() || !q_opt->count())
                throw invalid("--gram needs --p and --q");
            if (p2_opt->count() || q2_opt->count() || pq_opt->count())
                throw invalid("give either --p2/--q2/--pq or --gram/--p/--q, not both");
            const IntMatrix g = read_gram(gram);
            const auto pv = parse_int_list(p, "--p");
            const auto qv = parse_int_list(q, "--q");
            inputs["gram"] = gram;
            inputs["p"] = str_list(pv);
            inputs["q"] = str_list(qv);
            return ChargeData::from_lattice(to_vector(pv), to_vector(qv), g);
        }
        if (!p2_opt->count() || !q2_opt->count() || !pq_opt->count())
            throw invalid("charges need --p2, --q2 and --pq");
        ChargeData c{parse_int(p2, "--p2"), parse_int(q2, "--q2"), parse_int(pq, "--pq"), std::nullopt};
        inputs["p2"] = str(c.p2);
        inputs["q2"] = str(c.q2);
        inputs["pq"] = str(c.pq);
        return c;
    }
};

json form_json(const BinaryQuadraticForm& f)
{
    return triple(f.a, f.b, f.c);
}

// attract

Envelope cmd_attract(const ChargeOptions& opts, Context& ctx)
{
    Envelope env{"attract"};
    const ChargeData c = opts.resolve(env.inputs);
    const AttractorPoint pt = attractor_point(c);
    auto& r = env.result;
    r["discriminant"] = str(pt.D);
    r["tau"] = pt.tau.to_string();
    r["tau_numeric"] = dec(embed(pt.tau, ctx.prec), ctx.prec);
    r["associated_form"] = form_json(pt.associated_form);
    r["reduced_form"] = form_json(pt.form);
    r["form_discriminant"] = str(pt.associated_form.disc());
    r["content"] = str(pt.content);
    r["order_discriminant"] = str(pt.order_disc);
    r["class_number"] = str(pt.class_number);
    r["fundamental_discriminant"] = str(pt.fundamental_disc);
    r["conductor"] = str(pt.conductor);
    r["entropy"] = dec(entropy_invariant(c, ctx.prec), ctx.prec);

    const QuadraticNumber residual = attractor_residual(c, pt.tau);
    env.certify("root_residual", residual.to_string(), residual.is_zero());
    env.certify("form_discriminant", str(pt.associated_form.disc()), pt.associated_form.disc() == 4 * pt.D);
    env.certify("upper_half_plane", pt.tau.to_string(), pt.tau.upper_half_plane());

    if (c.provenance) {
        const auto& pv = *c.provenance;
        const K3FormCertificate k3 = k3_form_certificate(pv.p, pv.q, pv.gram);
        json omega = json::array();
        for (const auto& w : k3.omega)
            omega.push_back(w.to_string());
        r["k3"] = {{"omega", omega},
                   {"isotropy", k3.isotropy.to_string()},
                   {"pairing", k3.pairing.to_string()},
                   {"expected_pairing", k3.expected_pairing.get_str()}};
        env.certify("k3_isotropy", k3.isotropy.to_string(), k3.isotropic);
        env.certify("k3_positivity", k3.pairing.to_string(), k3.positive);
    }
    return env;
}

// certify

Envelope cmd_certify(const ChargeOptions& opts, Context& ctx)
{
    Envelope env{"certify"};
    const ChargeData c = opts.resolve(env.inputs);
    const CmCertificate cert = certify_attractor_cm(c, ctx.prec);
    auto& r = env.result;
    r["tau"] = cert.point.tau.to_string();
    r["order_discriminant"] = str(cert.point.order_disc);
    r["fundamental_discriminant"] = str(cert.point.fundamental_disc);
    r["conductor"] = str(cert.point.conductor);
    r["class_number"] = str(cert.class_number);
    r["field_label"] = cert.field_label;
    json coeffs = json::array();
    for (const auto& a : cert.polynomial.coeffs)
        coeffs.push_back(a.get_str());
    r["polynomial"] = coeffs;
    r["j"] = dec(cert.j, ctx.prec);
    r["residual"] = dec(cert.residual, ctx.prec);
    r["threshold"] = dec(cert.threshold, ctx.prec);
    r["evaluation_precision"] = str(cert.precision);
    env.certify("class_polynomial_residual", dec(cert.residual, ctx.prec), cert.certified);
    env.certify("degree_equals_class_number", str(static_cast<Int>(cert.polynomial.degree())),
                static_cast<Int>(cert.polynomial.degree()) == cert.point.class_number);
    return env;
}

// hcp

Envelope cmd_hcp(const std::string& disc_text, const std::string& cache_path, bool use_cache, Context& ctx)
{
    Envelope env{"hcp"};
    const Int disc = parse_int(disc_text, "--disc");
    env.inputs["disc"] = str(disc);
    const Int h = class_number(disc);
    const BigFloat threshold = exp2i(-static_cast<long>(ctx.prec / 4), 64);

    HcpCache cache;
    if (use_cache) {
        try {
            cache = load_hcp_cache(cache_path);
        } catch (const CacheError& e) {
            ctx.warn("ignoring corrupt HCP cache '" + cache_path + "': " + e.what());
            cache.clear();
        }
    }

    ClassPolynomial poly;
    poly.disc = disc;
    BigFloat residual(64);
    bool have = false;
    if (const auto it = cache.find(disc); it != cache.end()) {
        poly.coeffs = it->second;
        if (static_cast<Int>(poly.degree()) == h && !poly.coeffs.empty() && poly.coeffs.back() == 1) {
            residual = principal_root_residual(poly, ctx.prec);
            have = residual < threshold;
        }
        if (!have)
            ctx.warn("cached polynomial for disc " + str(disc) + " failed validation; recomputing");
    }
    if (!have) {
        poly = hilbert_class_polynomial(disc, ctx.prec);
        residual = principal_root_residual(poly, ctx.prec);
        if (use_cache) {
            cache[disc] = poly.coeffs;
            try {
                save_hcp_cache(cache_path, cache);
            } catch (const std::exception& e) {
                ctx.warn(std::string("could not write HCP cache: ") + e.what());
            }
        }
    }

    json coeffs = json::array();
    std::ostringstream csv;
    csv << "degree,coeff\n";
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
        coeffs.push_back(poly.coeffs[i].get_str());
        csv << i << ',' << poly.coeffs[i].get_str() << '\n';
    }
    auto& r = env.result;
    r["disc"] = str(disc);
    r["class_number"] = str(h);
    r["degree"] = str(static_cast<Int>(poly.degree()));
    r["coeffs"] = coeffs;
    r["residual"] = dec(residual, ctx.prec);
    env.certify("degree_equals_class_number", str(static_cast<Int>(poly.degree())), static_cast<Int>(poly.degree()) == h);
    env.certify("principal_root_residual", dec(residual, ctx.prec), residual < threshold);
    env.csv = csv.str();
    return env;
}

// jval

Envelope cmd_jval(const std::string& tau_text, Context& ctx)
{
    Envelope env{"jval"};
    const BigComplex tau = parse_big_complex(tau_text, ctx.prec, "--tau");
    env.inputs["tau"] = dec(tau, ctx.prec);
    const JValue jv = j_value(tau, ctx.prec);
    auto& r = env.result;
    r["j"] = dec(jv.value, ctx.prec);
    r["reduced_tau"] = dec(jv.reduced_tau, ctx.prec);
    r["terms"] = str(static_cast<Int>(jv.terms));
    r["working_precision"] = str(jv.working_precision);
    r["log2_error_bound"] = dbl(jv.log2_error);
    env.certify("error_bound", dbl(jv.log2_error), jv.log2_error < -static_cast<double>(ctx.prec) / 2);
    return env;
}

// weber

std::string weber_case_name(WeberCase c)
{
    switch (c) {
    case WeberCase::J1728:
        return "j=1728";
    case WeberCase::J0:
        return "j=0";
    case WeberCase::Generic:
        break;
    }
    return "generic";
}

Envelope cmd_weber(const ChargeOptions& opts, const std::string& n_text, Context& ctx)
{
    Envelope env{"weber"};
    const ChargeData c = opts.resolve(env.inputs);
    const Int n = parse_int(n_text, "--n");
    env.inputs["n"] = str(n);
    if (n < 2 || n > 64)
        throw invalid("--n must lie in 2..64");
    const AttractorPoint pt = attractor_point(c);
    const WeierstrassModel model = model_from_tau(embed(pt.tau, ctx.prec + 64), ctx.prec);
    const auto points = torsion_points(model, n);
    const WeberCase wc = weber_case(model);

    const BigFloat gate = exp2i(-static_cast<long>(ctx.prec / 2) + 10, 64);
    BigFloat curve_residual(64);
    BigFloat parity_residual(64);
    json pts = json::array();
    std::ostringstream csv;
    csv << "a,b,n,x_re,x_im,y_re,y_im,weber_re,weber_im\n";
    for (const auto& p : points) {
        const BigComplex w = weber_function(model, p);
        const BigFloat res = (p.y * p.y - model.rhs(p.x)).abs();
        if (res > curve_residual)
            curve_residual = res.with_precision(64);
        const Int ma = mod_floor(-p.a, n);
        const Int mb = mod_floor(-p.b, n);
        const auto& mirror = points[static_cast<std::size_t>(ma * n + mb - 1)];
        const BigFloat pr = (mirror.x - p.x).abs();
        if (pr > parity_residual)
            parity_residual = pr.with_precision(64);
        pts.push_back({{"a", str(p.a)},
                       {"b", str(p.b)},
                       {"n", str(p.n)},
                       {"x", dec(p.x, ctx.prec)},
                       {"y", dec(p.y, ctx.prec)},
                       {"weber", dec(w, ctx.prec)}});
        csv << p.a << ',' << p.b << ',' << p.n << ',' << dec(p.x.re(), ctx.prec) << ',' << dec(p.x.im(), ctx.prec)
            << ',' << dec(p.y.re(), ctx.prec) << ',' << dec(p.y.im(), ctx.prec) << ',' << dec(w.re(), ctx.prec) << ','
            << dec(w.im(), ctx.prec) << '\n';
    }
    const BigComplex j_direct = j_value(embed(pt.tau, ctx.prec + 64), ctx.prec).value;
    const BigFloat j_gap = (model.j - j_direct).abs().with_precision(64);
    BigFloat j_scale = abs(j_direct.re()) + abs(j_direct.im()) + BigFloat(1L, 64);

    auto& r = env.result;
    r["tau"] = pt.tau.to_string();
    r["A"] = dec(model.A, ctx.prec);
    r["B"] = dec(model.B, ctx.prec);
    r["delta"] = dec(model.delta, ctx.prec);
    r["j"] = dec(model.j, ctx.prec);
    r["case"] = weber_case_name(wc);
    r["points"] = pts;
    env.certify("curve_equation", dec(curve_residual, ctx.prec), curve_residual < gate);
    env.certify("x_parity", dec(parity_residual, ctx.prec), parity_residual < gate);
    env.certify("j_consistency", dec(j_gap, ctx.prec), j_gap < gate * j_scale);
    env.csv = csv.str();
    return env;
}

// curve

Envelope cmd_curve(const std::string& d_text, const std::string& k_text, const std::string& l_text, bool orbits,
                   Context&)
{
    Envelope env{"curve"};
    const CurveSignature sig =
        CurveSignature::make(parse_int(d_text, "--d"), parse_int(k_text, "--k"), parse_int(l_text, "--l"));
    env.inputs = {{"d", str(sig.d)}, {"k", str(sig.k)}, {"l", str(sig.l)}, {"orbits", orbits}};
    if (sig.d > 200)
        throw invalid("--d must be at most 200");

    const auto forms = enumerate_forms(sig);
    const auto factors = decompose_jacobian(sig);
    const auto descended = descent(sig);
    const Int g = static_cast<Int>(forms.size()) / 2;

    json forms_json = json::array();
    for (const auto& f : forms)
        forms_json.push_back(triple(f.r, f.s, f.t));
    json factors_json = json::array();
    std::ostringstream csv;
    csv << "r,s,t,level,dimension,orbit_size,cm_set\n";
    Int dim_sum = 0;
    bool cm_sizes = true;
    for (const auto& f : factors) {
        const auto& key = f.orbit.front();
        dim_sum += f.dimension;
        cm_sizes = cm_sizes && static_cast<Int>(f.cm_set.size()) * 2 == euler_phi(f.level);
        json fj = {{"key", triple(key.r, key.s, key.t)},
                   {"level", str(f.level)},
                   {"dimension", str(f.dimension)},
                   {"orbit_size", str(static_cast<Int>(f.orbit.size()))},
                   {"cm_set", str_list(f.cm_set)}};
        if (orbits) {
            json orbit = json::array();
            for (const auto& o : f.orbit)
                orbit.push_back(triple(o.r, o.s, o.t));
            fj["orbit"] = orbit;
        }
        factors_json.push_back(fj);
        std::string cm;
        for (Int a : f.cm_set)
            cm += (cm.empty() ? "" : " ") + str(a);
        csv << key.r << ',' << key.s << ',' << key.t << ',' << f.level << ',' << f.dimension << ',' << f.orbit.size()
            << ',' << cm << '\n';
    }
    auto& r = env.result;
    r["genus"] = str(g);
    r["form_count"] = str(static_cast<Int>(forms.size()));
    r["forms"] = forms_json;
    r["factors"] = factors_json;
    r["descent_count"] = str(static_cast<Int>(descended.size()));
    r["cm_set_convention"] = "units modulo the factor level, evaluated on the key triple divided by gcd(r, ks, lt, d)";
    env.certify("dimension_sum", str(dim_sum), dim_sum == g);
    env.certify("descent_bijection", str(static_cast<Int>(descended.size())), descended == forms);
    env.certify("cm_set_sizes", cm_sizes ? "phi(level)/2" : "mismatch", cm_sizes);
    env.csv = csv.str();
    return env;
}

// resolve

Envelope cmd_resolve(const std::string& n_text, const std::string& q_text, const std::optional<std::string>& genus_text,
                     Context&)
{
    Envelope env{"resolve"};
    const Int n = parse_int(n_text, "--n");
    const Int q = parse_int(q_text, "--q");
    env.inputs = {{"n", str(n)}, {"q", str(q)}};
    const HJResolution res = hj_expand(n, q);
    const mpq_class back = hj_reconstruct(res.steps);

    // q q' = 1 mod n
    Int dual_q = 1;
    while ((dual_q * q) % n != 1 % n)
        ++dual_q;
    auto dual_steps = hj_expand(n, dual_q).steps;
    std::reverse(dual_steps.begin(), dual_steps.end());

    auto& r = env.result;
    r["n"] = str(n);
    r["q"] = str(q);
    r["steps"] = str_list(res.steps);
    r["length"] = str(res.length());
    r["reconstructed"] = back.get_str();
    r["dual_q"] = str(dual_q);
    if (genus_text) {
        const Int g = parse_int(*genus_text, "--genus");
        env.inputs["genus"] = str(g);
        const auto contrib = resolution_contributions({{g, n, q}});
        r["genus"] = str(g);
        r["delta_h2"] = str(contrib.delta_h2);
        r["delta_h3"] = str(contrib.delta_h3);
    }
    env.certify("round_trip", back.get_str(), back == mpq_class(static_cast<long>(n), static_cast<long>(q)));
    env.certify("dual_reversal", str(dual_q), dual_steps == res.steps);
    return env;
}

// fermat

Envelope cmd_fermat(const std::string& d_text, const std::string& dim_text, bool hodge, Context&)
{
    Envelope env{"fermat"};
    const Int d = parse_int(d_text, "--d");
    const Int n = parse_int(dim_text, "--dim");
    env.inputs = {{"d", str(d)}, {"dim", str(n)}, {"hodge", hodge}};
    if (d > 1000 || n > 1000)
        throw invalid("--d and --dim must be at most 1000");
    const mpz_class total = fermat_primitive_dim(d, n);
    const auto numbers = fermat_hodge_numbers(d, n);
    mpz_class sum = 0;
    for (const auto& x : numbers)
        sum += x;
    const bool palindrome = std::equal(numbers.begin(), numbers.end(), numbers.rbegin());

    auto& r = env.result;
    r["d"] = str(d);
    r["dim"] = str(n);
    r["primitive_dim"] = total.get_str();
    std::ostringstream csv;
    if (hodge) {
        json h = json::array();
        csv << "weight,count\n";
        for (std::size_t w = 0; w < numbers.size(); ++w) {
            h.push_back(numbers[w].get_str());
            csv << w + 1 << ',' << numbers[w].get_str() << '\n';
        }
        r["hodge"] = h;
    } else {
        csv << "d,dim,primitive_dim\n" << d << ',' << n << ',' << total.get_str() << '\n';
    }
    env.certify("hodge_total", sum.get_str(), sum == total);
    env.certify("hodge_palindrome", palindrome ? "true" : "false", palindrome);
    env.csv = csv.str();
    return env;
}

// sk-check

Envelope cmd_sk(const std::string& d_text, const std::string& r_text, const std::string& s_text, Context&)
{
    Envelope env{"sk-check"};
    const Int d = parse_int(d_text, "--d");
    const Int rr = parse_int(r_text, "--r");
    const Int s = parse_int(s_text, "--s");
    env.inputs = {{"d", str(d)}, {"r", str(rr)}, {"s", str(s)}};
    const ShiodaKatsuraCheck chk = shioda_katsura_check(d, rr, s);
    auto& r = env.result;
    r["lhs"] = str(chk.lhs);
    r["rhs"] = str(chk.rhs);
    r["lhs_fermat"] = str(chk.lhs_fermat);
    r["lhs_lower"] = str(chk.lhs_lower);
    r["rhs_invariant"] = str(chk.rhs_invariant);
    r["rhs_product"] = str(chk.rhs_product);
    r["equal"] = chk.equal;
    r["conventions"] = chk.conventions;
    env.certify("dimension_identity", str(chk.lhs) + "=" + str(chk.rhs), chk.equal);
    return env;
}

// flow

struct FlowOptions {
    std::string tau0;
    std::string trace;
    double step = FlowConfig{}.step;
    double tol = FlowConfig{}.tol;
    std::size_t max_steps = FlowConfig{}.max_steps;
};

void write_trace(const std::string& path, const std::vector<FlowState<double>>& trajectory)
{
    std::ofstream out(path);
    if (!out)
        throw invalid("cannot write trace file '" + path + "'");
    write_trace_csv(out, trajectory);
}

Envelope cmd_flow(const ChargeOptions& opts, const FlowOptions& fo, Context&)
{
    Envelope env{"flow"};
    const ChargeData c = opts.resolve(env.inputs);
    const std::complex<double> tau0 = parse_complex(fo.tau0, "--tau0");
    env.inputs["tau0"] = {{"re", dbl(tau0.real())}, {"im", dbl(tau0.imag())}};
    env.inputs["step"] = dbl(fo.step);
    env.inputs["tol"] = dbl(fo.tol);
    env.inputs["max_steps"] = str(static_cast<Int>(fo.max_steps));
    if (!(tau0.imag() > 0))
        throw Error(ErrorKind::NotUpperHalfPlane, "--tau0 must have positive imaginary part");
    FlowConfig config;
    config.step = fo.step;
    config.tol = fo.tol;
    config.max_steps = fo.max_steps;

    FlowResult<double> res;
    try {
        res = flow_integrate(c, tau0, config);
    } catch (const FlowNonConvergence<double>& e) {
        if (!fo.trace.empty())
            write_trace(fo.trace, e.trajectory());
        throw;
    }
    if (!fo.trace.empty())
        write_trace(fo.trace, res.trajectory);

    const auto& cert = res.certificate;
    const auto& last = res.trajectory.back();
    const double gate = 10 * config.tol;
    auto& r = env.result;
    r["endpoint"] = {{"re", dbl(cert.endpoint.real())}, {"im", dbl(cert.endpoint.imag())}};
    r["exact_tau"] = attractor_point(c).tau.to_string();
    r["steps"] = str(static_cast<Int>(res.steps));
    r["rho"] = dbl(last.rho);
    r["U"] = dbl(last.U);
    r["Z2"] = dbl(cert.Z2);
    r["entropy"] = dbl(cert.entropy);
    r["tau_error"] = dbl(cert.tau_error);
    r["Z2_error"] = dbl(cert.Z2_error);
    env.certify("endpoint", dbl(cert.tau_error), cert.tau_error < gate);
    env.certify("entropy", dbl(cert.Z2_error), cert.Z2_error < gate);
    env.certify("monotone", cert.monotone ? "true" : "false", cert.monotone);
    std::ostringstream csv;
    write_trace_csv(csv, res.trajectory);
    env.csv = csv.str();
    return env;
}

Precision resolve_precision(CLI::Option* opt, Int value, const Environment& env)
{
    Int bits = kDefaultPrecision;
    if (opt->count())
        bits = value;
    else if (env.prec)
        bits = parse_int(*env.prec, "ATTRARITH_PREC");
    if (bits < kMinPrecision || bits > kMaxPrecision)
        throw invalid("precision must lie in " + str(kMinPrecision) + ".." + str(kMaxPrecision) + " bits, got " +
                      str(bits));
    return static_cast<Precision>(bits);
}

json envelope_json(const Envelope& env, Precision prec)
{
    return {{"command", env.command},
            {"inputs", env.inputs},
            {"result", env.result},
            {"certificates", env.certificates},
            {"precision_bits", prec}};
}

} // namespace

Environment Environment::from_process()
{
    Environment env;
    if (const char* p = std::getenv("ATTRARITH_PREC"))
        env.prec = std::string(p);
    return env;
}

HcpCache load_hcp_cache(const std::filesystem::path& path)
{
    HcpCache cache;
    if (!std::filesystem::exists(path))
        return cache;
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CacheError("cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw CacheError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw CacheError("top level is not an array");
    for (const auto& rec : doc) {
        if (!rec.is_object() || !rec.contains("disc") || !rec.contains("coeffs") || !rec["disc"].is_string() ||
            !rec["coeffs"].is_array())
            throw CacheError("record lacks string disc or coeffs array");
        Int disc = 0;
        try {
            disc = parse_int(rec["disc"].get<std::string>(), "disc");
        } catch (const Error&) {
            throw CacheError("bad disc");
        }
        std::vector<mpz_class> coeffs;
        for (const auto& c : rec["coeffs"]) {
            if (!c.is_string())
                throw CacheError("coefficient is not a string");
            mpz_class v;
            if (v.set_str(c.get<std::string>(), 10) != 0)
                throw CacheError("coefficient is not an integer");
            coeffs.push_back(v);
        }
        if (coeffs.empty())
            throw CacheError("empty coefficient list");
        cache[disc] = std::move(coeffs);
    }
    return cache;
}

void save_hcp_cache(const std::filesystem::path& path, const HcpCache& cache)
{
    json doc = json::array();
    for (const auto& [disc, coeffs] : cache) {
        json cs = json::array();
        for (const auto& c : coeffs)
            cs.push_back(c.get_str());
        doc.push_back({{"disc", std::to_string(disc)}, {"coeffs", cs}});
    }
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw CacheError("cannot write " + tmp.string());
        out << doc.dump(2) << '\n';
        out.flush();
        if (!out)
            throw CacheError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw CacheError("rename failed: " + ec.message());
    }
}

RunResult run(const std::vector<std::string>& args, const Environment& environment)
{
    RunResult res;
    CLI::App app{"attrarith: arithmetic of attractor points and CM data"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Int prec_value = 0;
    auto* prec_opt = app.add_option("--prec", prec_value, "working precision in bits (default 256, env ATTRARITH_PREC)");
    auto* json_flag = app.add_flag("--json", "emit the JSON envelope (default)");
    auto* csv_flag = app.add_flag("--csv", "emit CSV for tabular commands");
    json_flag->excludes(csv_flag);

    ChargeOptions attract_opts, certify_opts, weber_opts, flow_charge;
    auto* attract = app.add_subcommand("attract", "attractor point, associated form and class data");
    attract_opts.attach(attract, true);
    auto* certify = app.add_subcommand("certify", "algebraicity certificate for j at the attractor point");
    certify_opts.attach(certify, true);

    std::string disc, cache_path;
    auto* hcp = app.add_subcommand("hcp", "Hilbert class polynomial");
    hcp->add_option("--disc", disc, "negative discriminant")->required();
    auto* cache_opt = hcp->add_option("--cache", cache_path, "JSON cache file");

    std::string tau;
    auto* jval = app.add_subcommand("jval", "j-invariant at a point of the upper half-plane");
    jval->add_option("--tau", tau, "RE,IM")->required();

    std::string weber_n = "2";
    auto* weber = app.add_subcommand("weber", "Weber values of torsion points on the attractor curve");
    weber_opts.attach(weber, false);
    weber->add_option("--n", weber_n, "torsion order");

    std::string cd, ck = "1", cl = "1";
    bool orbits = false;
    auto* curve = app.add_subcommand("curve", "Jacobian decomposition of a weighted Brieskorn-Pham curve");
    curve->add_option("--d", cd, "degree")->required();
    curve->add_option("--k", ck, "weight of y");
    curve->add_option("--l", cl, "weight of z");
    curve->add_flag("--orbits", orbits, "list orbit members");

    std::string rn, rq, rg;
    auto* resolve = app.add_subcommand("resolve", "Hirzebruch-Jung resolution of a cyclic quotient singularity");
    resolve->add_option("--n", rn, "order")->required();
    resolve->add_option("--q", rq, "twist")->required();
    auto* genus_opt = resolve->add_option("--genus", rg, "genus of the singular curve");

    std::string fd, fdim;
    bool hodge = false;
    auto* fermat = app.add_subcommand("fermat", "primitive cohomology of the Fermat variety");
    fermat->add_option("--d", fd, "degree")->required();
    fermat->add_option("--dim", fdim, "dimension")->required();
    fermat->add_flag("--hodge", hodge, "split by weight");

    std::string sd, sr, ss;
    auto* sk = app.add_subcommand("sk-check", "dimension check of the inductive Fermat decomposition");
    sk->add_option("--d", sd, "degree")->required();
    sk->add_option("--r", sr, "first factor dimension")->required();
    sk->add_option("--s", ss, "second factor dimension")->required();

    FlowOptions flow_opts;
    auto* flow = app.add_subcommand("flow", "integrate the attractor flow");
    flow_charge.attach(flow, false);
    flow->add_option("--tau0", flow_opts.tau0, "RE,IM")->required();
    flow->add_option("--trace", flow_opts.trace, "CSV trajectory output");
    flow->add_option("--step", flow_opts.step, "integration step");
    flow->add_option("--tol", flow_opts.tol, "convergence tolerance");
    flow->add_option("--max-steps", flow_opts.max_steps, "step budget");

    std::vector<std::string> full{"attrarith"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        res.out = out.str();
        res.err = err.str();
        res.exit_code = code == 0 ? kExitOk : kExitInvalidInput;
        return res;
    }

    Context ctx;
    try {
        ctx.prec = resolve_precision(prec_opt, prec_value, environment);
        const bool csv = csv_flag->count() > 0;
        const std::string name = app.get_subcommands().front()->get_name();
        if (csv && !kTabularCommands.contains(name))
            throw invalid("--csv is not available for " + name);

        Envelope env;
        if (attract->parsed())
            env = cmd_attract(attract_opts, ctx);
        else if (certify->parsed())
            env = cmd_certify(certify_opts, ctx);
        else if (hcp->parsed())
            env = cmd_hcp(disc, cache_path, cache_opt->count() > 0, ctx);
        else if (jval->parsed())
            env = cmd_jval(tau, ctx);
        else if (weber->parsed())
            env = cmd_weber(weber_opts, weber_n, ctx);
        else if (curve->parsed())
            env = cmd_curve(cd, ck, cl, orbits, ctx);
        else if (resolve->parsed())
            env = cmd_resolve(rn, rq, genus_opt->count() ? std::optional<std::string>(rg) : std::nullopt, ctx);
        else if (fermat->parsed())
            env = cmd_fermat(fd, fdim, hodge, ctx);
        else if (sk->parsed())
            env = cmd_sk(sd, sr, ss, ctx);
        else
            env = cmd_flow(flow_charge, flow_opts, ctx);

        res.out = csv ? *env.csv : envelope_json(env, ctx.prec).dump(2) + "\n";
        res.err = ctx.warnings;
        for (const auto& c : env.certificates) {
            if (!c["passed"].get<bool>()) {
                res.err += "error: certificate " + c["name"].get<std::string>() + " failed\n";
                res.exit_code = kExitComputationFailure;
            }
        }
    } catch (const Error& e) {
        res.out.clear();
        res.err = ctx.warnings + "error: " + e.what() + "\n";
        res.exit_code = is_computation_failure(e.kind()) ? kExitComputationFailure : kExitInvalidInput;
    } catch (const std::exception& e) {
        res.out.clear();
        res.err = ctx.warnings + "error: " + e.what() + "\n";
        res.exit_code = kExitComputationFailure;
    }
    return res;
}

} // namespace attrarith::cli
