#include "cgl/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace cgl {

Domain RunConfig::domain() const {
    return dimension == 1 ? Domain::interval(l1, n1) : Domain::rectangle(l1, l2, n1, n2);
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    return out;
}

const char* const kKnownKeys[] = {
    "scenario",
    "domain.dimension", "domain.l1", "domain.l2", "domain.n1", "domain.n2",
    "params.lambda", "params.alpha", "params.kappa", "params.beta", "params.gamma",
    "params.q", "params.horizon", "params.dt", "params.scheme", "params.nonlinearity_sign",
    "init.kind", "init.modes", "init.amplitude", "init.seed", "init.decay", "init.file",
    "forcing.kind", "forcing.modes", "forcing.amplitude", "forcing.t0", "forcing.t1",
    "forcing.file",
    "output.dir", "seed", "threads",
    "tol.fixed_point", "fixed_point.max_iter", "fixed_point.s_request",
    "blowup.theta", "blowup.max_refinements",
    "certify.trials", "certify.radius_factor",
    "sweep.kappa", "sweep.amplitude",
    "verify.fast",
};

bool known_key(const std::string& k) {
    for (const char* s : kKnownKeys)
        if (k == s) return true;
    return false;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += format_double(v[i]);
    }
    return out;
}

RunConfig from_keys(const std::map<std::string, std::string>& kv,
                    const std::string& forced_scenario) {
    RunConfig cfg;
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("scenario")) cfg.scenario = *v;
    if (!forced_scenario.empty()) {
        if (!cfg.scenario.empty() && cfg.scenario != forced_scenario)
            throw ConfigError("config: scenario '" + cfg.scenario +
                              "' conflicts with the '" + forced_scenario + "' subcommand");
        cfg.scenario = forced_scenario;
    }
    if (cfg.scenario.empty()) throw ConfigError("config: missing required key 'scenario'");
    static const char* const scenarios[] = {"simulate", "fixed_point", "verify",
                                            "blowup", "certify", "sweep"};
    bool ok = false;
    for (const char* s : scenarios) ok = ok || cfg.scenario == s;
    if (!ok) throw ConfigError("config: unknown scenario '" + cfg.scenario + "'");

    if (const auto* v = get("domain.dimension")) cfg.dimension = int(parse_int("domain.dimension", *v));
    if (const auto* v = get("domain.l1")) cfg.l1 = parse_double("domain.l1", *v);
    if (const auto* v = get("domain.l2")) cfg.l2 = parse_double("domain.l2", *v);
    if (const auto* v = get("domain.n1")) cfg.n1 = int(parse_int("domain.n1", *v));
    if (const auto* v = get("domain.n2")) cfg.n2 = int(parse_int("domain.n2", *v));

    if (const auto* v = get("params.lambda")) cfg.params.lambda = parse_double("params.lambda", *v);
    if (const auto* v = get("params.alpha")) cfg.params.alpha = parse_double("params.alpha", *v);
    if (const auto* v = get("params.kappa")) cfg.params.kappa = parse_double("params.kappa", *v);
    if (const auto* v = get("params.beta")) cfg.params.beta = parse_double("params.beta", *v);
    if (const auto* v = get("params.gamma")) cfg.params.gamma = parse_double("params.gamma", *v);
    if (const auto* v = get("params.q")) cfg.params.q = parse_double("params.q", *v);
    if (const auto* v = get("params.horizon")) cfg.params.horizon = parse_double("params.horizon", *v);
    if (const auto* v = get("params.dt")) cfg.params.dt = parse_double("params.dt", *v);
    if (const auto* v = get("params.scheme")) {
        if (*v == "semi_implicit") cfg.params.scheme = Scheme::semi_implicit;
        else if (*v == "explicit_rk4") cfg.params.scheme = Scheme::explicit_rk4;
        else throw ConfigError("config: params.scheme must be semi_implicit or explicit_rk4");
    }
    if (const auto* v = get("params.nonlinearity_sign"))
        cfg.params.nonlinearity_sign = int(parse_int("params.nonlinearity_sign", *v));

    if (const auto* v = get("init.kind")) cfg.init_kind = *v;
    if (const auto* v = get("init.modes")) cfg.init_modes = *v;
    if (const auto* v = get("init.amplitude")) cfg.init_amplitude = parse_double("init.amplitude", *v);
    if (const auto* v = get("init.seed")) cfg.init_seed = std::uint64_t(parse_int("init.seed", *v));
    if (const auto* v = get("init.decay")) cfg.init_decay = parse_double("init.decay", *v);
    if (const auto* v = get("init.file")) cfg.init_file = *v;

    if (const auto* v = get("forcing.kind")) cfg.forcing_kind = *v;
    if (const auto* v = get("forcing.modes")) cfg.forcing_modes = *v;
    if (const auto* v = get("forcing.amplitude")) cfg.forcing_amplitude = parse_double("forcing.amplitude", *v);
    if (const auto* v = get("forcing.t0")) cfg.forcing_t0 = parse_double("forcing.t0", *v);
    if (const auto* v = get("forcing.t1")) cfg.forcing_t1 = parse_double("forcing.t1", *v);
    if (const auto* v = get("forcing.file")) cfg.forcing_file = *v;

    if (const auto* v = get("output.dir")) cfg.output_dir = *v;
    if (const auto* v = get("seed")) cfg.seed = std::uint64_t(parse_int("seed", *v));
    if (const auto* v = get("threads")) cfg.threads = int(parse_int("threads", *v));

    if (const auto* v = get("tol.fixed_point")) cfg.tol_fixed_point = parse_double("tol.fixed_point", *v);
    if (const auto* v = get("fixed_point.max_iter")) cfg.fp_max_iter = int(parse_int("fixed_point.max_iter", *v));
    if (const auto* v = get("fixed_point.s_request")) cfg.fp_s_request = parse_double("fixed_point.s_request", *v);

    if (const auto* v = get("blowup.theta")) cfg.blowup_theta = parse_double("blowup.theta", *v);
    if (const auto* v = get("blowup.max_refinements"))
        cfg.blowup_max_refinements = int(parse_int("blowup.max_refinements", *v));

    if (const auto* v = get("certify.trials")) cfg.certify_trials = int(parse_int("certify.trials", *v));
    if (const auto* v = get("certify.radius_factor"))
        cfg.certify_radius_factor = parse_double("certify.radius_factor", *v);

    if (const auto* v = get("sweep.kappa")) cfg.sweep_kappa = parse_list("sweep.kappa", *v);
    if (const auto* v = get("sweep.amplitude")) cfg.sweep_amplitude = parse_list("sweep.amplitude", *v);
    if (const auto* v = get("verify.fast")) cfg.verify_fast = parse_bool("verify.fast", *v);
    return cfg;
}

void validate(RunConfig& cfg) {
    // Subcriticality is diagnosed before the dimension support check so that
    // an unsupported-supercritical pair is reported for what it is.
    if (!(cfg.params.q > 2.0))
        throw ConfigError("config: params.q must exceed 2");
    try {
        gns_exponents(cfg.params.q, cfg.dimension);
    } catch (const SupercriticalExponent& e) {
        throw ConfigError(std::string("config: SupercriticalExponent: ") + e.what());
    }
    if (cfg.dimension != 1 && cfg.dimension != 2)
        throw ConfigError("config: domain.dimension must be 1 or 2 (discretized domains)");
    if (!(cfg.l1 > 0.0) || (cfg.dimension == 2 && !(cfg.l2 > 0.0)))
        throw ConfigError("config: side lengths must be positive");
    if (cfg.n1 < 4 || (cfg.dimension == 2 && cfg.n2 < 4))
        throw ConfigError("config: resolutions must be >= 4");
    if (!(cfg.params.lambda > 0.0))
        throw ConfigError("config: params.lambda must be positive");
    if (!(cfg.params.kappa > 0.0))
        throw ConfigError("config: params.kappa must be positive");
    if (!(cfg.params.dt > 0.0) || !(cfg.params.horizon > 0.0))
        throw ConfigError("config: params.dt and params.horizon must be positive");
    if (cfg.params.nonlinearity_sign != 1 && cfg.params.nonlinearity_sign != -1)
        throw ConfigError("config: params.nonlinearity_sign must be 1 or -1");
    if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
    if (!(cfg.tol_fixed_point > 0.0)) throw ConfigError("config: tol.fixed_point must be positive");
    if (cfg.fp_max_iter < 1) throw ConfigError("config: fixed_point.max_iter must be >= 1");
    if (!(cfg.blowup_theta > 0.0)) throw ConfigError("config: blowup.theta must be positive");
    if (cfg.certify_trials < 1) throw ConfigError("config: certify.trials must be >= 1");
    if (!(cfg.certify_radius_factor > 0.0 && cfg.certify_radius_factor < 1.0))
        throw ConfigError("config: certify.radius_factor must lie in (0,1)");

    static const char* const init_kinds[] = {"eigenmode", "random", "file"};
    bool ok = false;
    for (const char* s : init_kinds) ok = ok || cfg.init_kind == s;
    if (!ok) throw ConfigError("config: init.kind must be eigenmode, random or file");
    static const char* const forcing_kinds[] = {"zero", "constant", "pulse", "file"};
    ok = false;
    for (const char* s : forcing_kinds) ok = ok || cfg.forcing_kind == s;
    if (!ok) throw ConfigError("config: forcing.kind must be zero, constant, pulse or file");
    if (cfg.forcing_kind == "pulse" &&
        !(cfg.forcing_t0 >= 0.0 && cfg.forcing_t1 > cfg.forcing_t0))
        throw ConfigError("config: pulse forcing needs 0 <= forcing.t0 < forcing.t1");

    // Echo the resolved configuration, defaults included.
    auto& r = cfg.resolved;
    r["scenario"] = cfg.scenario;
    r["domain.dimension"] = std::to_string(cfg.dimension);
    r["domain.l1"] = format_double(cfg.l1);
    if (cfg.dimension == 2) r["domain.l2"] = format_double(cfg.l2);
    r["domain.n1"] = std::to_string(cfg.n1);
    if (cfg.dimension == 2) r["domain.n2"] = std::to_string(cfg.n2);
    r["params.lambda"] = format_double(cfg.params.lambda);
    r["params.alpha"] = format_double(cfg.params.alpha);
    r["params.kappa"] = format_double(cfg.params.kappa);
    r["params.beta"] = format_double(cfg.params.beta);
    r["params.gamma"] = format_double(cfg.params.gamma);
    r["params.q"] = format_double(cfg.params.q);
    r["params.horizon"] = format_double(cfg.params.horizon);
    r["params.dt"] = format_double(cfg.params.dt);
    r["params.scheme"] = cfg.params.scheme == Scheme::semi_implicit ? "semi_implicit" : "explicit_rk4";
    r["params.nonlinearity_sign"] = std::to_string(cfg.params.nonlinearity_sign);
    r["init.kind"] = cfg.init_kind;
    if (cfg.init_kind == "eigenmode") r["init.modes"] = cfg.init_modes;
    if (cfg.init_kind == "random") {
        r["init.seed"] = std::to_string(cfg.init_seed);
        r["init.decay"] = format_double(cfg.init_decay);
    }
    if (cfg.init_kind == "file") r["init.file"] = cfg.init_file;
    r["init.amplitude"] = format_double(cfg.init_amplitude);
    r["forcing.kind"] = cfg.forcing_kind;
    if (cfg.forcing_kind == "constant" || cfg.forcing_kind == "pulse") {
        r["forcing.modes"] = cfg.forcing_modes;
        r["forcing.amplitude"] = format_double(cfg.forcing_amplitude);
    }
    if (cfg.forcing_kind == "pulse") {
        r["forcing.t0"] = format_double(cfg.forcing_t0);
        r["forcing.t1"] = format_double(cfg.forcing_t1);
    }
    if (cfg.forcing_kind == "file") r["forcing.file"] = cfg.forcing_file;
    r["output.dir"] = cfg.output_dir;
    r["seed"] = std::to_string(cfg.seed);
    r["threads"] = std::to_string(cfg.threads);
    r["tol.fixed_point"] = format_double(cfg.tol_fixed_point);
    r["fixed_point.max_iter"] = std::to_string(cfg.fp_max_iter);
    r["fixed_point.s_request"] = format_double(cfg.fp_s_request);
    r["blowup.theta"] = format_double(cfg.blowup_theta);
    r["blowup.max_refinements"] = std::to_string(cfg.blowup_max_refinements);
    r["certify.trials"] = std::to_string(cfg.certify_trials);
    r["certify.radius_factor"] = format_double(cfg.certify_radius_factor);
    if (!cfg.sweep_kappa.empty()) r["sweep.kappa"] = format_list(cfg.sweep_kappa);
    if (!cfg.sweep_amplitude.empty()) r["sweep.amplitude"] = format_list(cfg.sweep_amplitude);
    r["verify.fast"] = cfg.verify_fast ? "true" : "false";
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& forced_scenario) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key or value");
        if (!known_key(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        if (kv.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                              key + "'");
        kv[key] = value;
    }
    RunConfig cfg = from_keys(kv, forced_scenario);
    validate(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path, const std::string& forced_scenario) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), forced_scenario);
}

ComplexField parse_mode_field(const Domain& domain, const std::string& spec) {
    ModePair m;
    m.c1 = ModeVector(domain);
    m.c2 = ModeVector(domain);
    std::stringstream ss(spec);
    std::string entry;
    bool any = false;
    while (std::getline(ss, entry, ';')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        any = true;
        std::stringstream es(entry);
        std::string kpart, repart, impart;
        if (!std::getline(es, kpart, ':') || !std::getline(es, repart, ':') ||
            !std::getline(es, impart))
            throw ConfigError("mode spec entry '" + entry + "': expected k[:xk2]:a:b");
        int k1 = 0, k2 = 1;
        auto x = kpart.find('x');
        if (x == std::string::npos) {
            k1 = int(parse_int("mode index", trim(kpart)));
        } else {
            k1 = int(parse_int("mode index", trim(kpart.substr(0, x))));
            k2 = int(parse_int("mode index", trim(kpart.substr(x + 1))));
        }
        if (domain.dimension == 1 && x != std::string::npos)
            throw ConfigError("mode spec entry '" + entry + "': 2-D index on a 1-D domain");
        if (k1 < 1 || k1 > domain.res[0] || k2 < 1 ||
            (domain.dimension == 2 && k2 > domain.res[1]))
            throw ConfigError("mode spec entry '" + entry + "': index out of range");
        std::size_t idx = domain.dimension == 1
                              ? std::size_t(k1 - 1)
                              : std::size_t(k1 - 1) * domain.res[1] + (k2 - 1);
        m.c1.a[idx] += parse_double("mode coefficient", trim(repart));
        m.c2.a[idx] += parse_double("mode coefficient", trim(impart));
    }
    if (!any) throw ConfigError("mode spec '" + spec + "' is empty");
    return from_mode_pair(domain, m);
}

namespace {

std::vector<double> read_csv_row(const std::string& line, int lineno) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double("csv line " + std::to_string(lineno), item));
    }
    return out;
}

}  // namespace

ComplexField build_initial(const RunConfig& cfg) {
    Domain d = cfg.domain();
    ComplexField u;
    if (cfg.init_kind == "eigenmode") {
        u = parse_mode_field(d, cfg.init_modes);
    } else if (cfg.init_kind == "random") {
        u = random_field(d, cfg.init_seed, cfg.init_decay);
    } else {
        std::ifstream in(cfg.init_file);
        if (!in) throw ConfigError("init.file: cannot open '" + cfg.init_file + "'");
        u = ComplexField(d);
        std::string line;
        std::size_t i = 0;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            line = trim(line);
            if (line.empty()) continue;
            auto row = read_csv_row(line, lineno);
            if (row.size() != 2)
                throw ConfigError("init.file line " + std::to_string(lineno) +
                                  ": expected 'u1,u2'");
            if (i >= u.size()) throw ConfigError("init.file: more rows than grid points");
            u.u1.values[i] = row[0];
            u.u2.values[i] = row[1];
            ++i;
        }
        if (i != u.size()) throw ConfigError("init.file: fewer rows than grid points");
    }
    return cfg.init_amplitude == 1.0 ? u : scale(cfg.init_amplitude, u);
}

Forcing build_forcing(const RunConfig& cfg) {
    Domain d = cfg.domain();
    if (cfg.forcing_kind == "zero") return Forcing::zero(d);
    if (cfg.forcing_kind == "constant") {
        ComplexField f = parse_mode_field(d, cfg.forcing_modes);
        return Forcing::constant(scale(cfg.forcing_amplitude, f));
    }
    if (cfg.forcing_kind == "pulse") {
        ComplexField f = scale(cfg.forcing_amplitude, parse_mode_field(d, cfg.forcing_modes));
        ComplexField z(d);
        double ramp = std::min(cfg.forcing_t1 - cfg.forcing_t0, cfg.params.dt) / 100.0;
        std::vector<double> ts;
        std::vector<ComplexField> fs;
        if (cfg.forcing_t0 > 0.0) {
            ts.push_back(0.0);
            fs.push_back(z);
            ts.push_back(cfg.forcing_t0);
            fs.push_back(z);
        } else {
            ts.push_back(0.0);
            fs.push_back(f);
        }
        if (cfg.forcing_t0 > 0.0) {
            ts.push_back(cfg.forcing_t0 + ramp);
            fs.push_back(f);
        }
        ts.push_back(cfg.forcing_t1);
        fs.push_back(f);
        ts.push_back(cfg.forcing_t1 + ramp);
        fs.push_back(z);
        if (cfg.forcing_t1 + ramp < cfg.params.horizon) {
            ts.push_back(cfg.params.horizon);
            fs.push_back(z);
        }
        return Forcing::sampled(std::move(ts), std::move(fs));
    }
    // file: rows "t, u1 values..., u2 values..."
    std::ifstream in(cfg.forcing_file);
    if (!in) throw ConfigError("forcing.file: cannot open '" + cfg.forcing_file + "'");
    std::vector<double> ts;
    std::vector<ComplexField> fs;
    std::string line;
    int lineno = 0;
    std::size_t npts = d.num_points();
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        auto row = read_csv_row(line, lineno);
        if (row.size() != 1 + 2 * npts)
            throw ConfigError("forcing.file line " + std::to_string(lineno) +
                              ": expected t followed by " + std::to_string(2 * npts) +
                              " values");
        ts.push_back(row[0]);
        ComplexField f(d);
        for (std::size_t i = 0; i < npts; ++i) {
            f.u1.values[i] = row[1 + i];
            f.u2.values[i] = row[1 + npts + i];
        }
        fs.push_back(std::move(f));
    }
    return Forcing::sampled(std::move(ts), std::move(fs));
}

}  // namespace cgl
