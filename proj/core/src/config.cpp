#include "vbgk/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vbgk/mesh.hpp"

namespace vbgk {

namespace {

std::string trim(std::string_view s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

long parse_long(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const long x = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + value);
    }
}

unsigned long parse_ulong(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const unsigned long x = std::stoul(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad unsigned value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::invalid_argument("config: bad boolean value for '" + key + "': " + value);
}

std::vector<double> parse_times(const std::string& key, const std::string& value)
{
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, trim(item)));
    return out;
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string to_string(SolverKind kind)
{
    switch (kind) {
        case SolverKind::Kinetic: return "kinetic";
        case SolverKind::Limit: return "limit";
        case SolverKind::Hybrid: return "hybrid";
    }
    throw std::invalid_argument("to_string: bad SolverKind");
}

std::string to_string(EpsKind kind)
{
    switch (kind) {
        case EpsKind::Constant: return "constant";
        case EpsKind::ArctanBump: return "arctan_bump";
    }
    throw std::invalid_argument("to_string: bad EpsKind");
}

SolverKind solver_from_string(std::string_view name)
{
    if (name == "kinetic") return SolverKind::Kinetic;
    if (name == "limit") return SolverKind::Limit;
    if (name == "hybrid") return SolverKind::Hybrid;
    throw std::invalid_argument("config: unknown solver '" + std::string(name) +
                                "' (expected kinetic|limit|hybrid)");
}

EpsKind eps_kind_from_string(std::string_view name)
{
    if (name == "constant") return EpsKind::Constant;
    if (name == "arctan_bump") return EpsKind::ArctanBump;
    throw std::invalid_argument("config: unknown eps profile '" + std::string(name) +
                                "' (expected constant|arctan_bump)");
}

void validate_config(const RunConfig& config)
{
    if (config.case_id < 1 || config.case_id > 4)
        throw std::invalid_argument("config: case must be 1..4");
    // Delegates grid checks (nx, nv, x_star, v_star) and provides m2.
    const PhaseMesh mesh = build_mesh(config.nx, config.nv, config.x_star, config.v_star);
    const DiscreteMaxwellian maxw = build_maxwellian(mesh);

    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("config: dt must be positive and finite");
    if (!(config.t_final >= 0.0) || !std::isfinite(config.t_final))
        throw std::invalid_argument("config: t_final must be >= 0 and finite");
    if (config.eps_profile == EpsKind::Constant &&
        (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)))
        throw std::invalid_argument("config: epsilon must be positive and finite");
    if (!(config.eta0 >= 0.0) || !std::isfinite(config.eta0) ||
        !(config.delta0 >= 0.0) || !std::isfinite(config.delta0))
        throw std::invalid_argument("config: eta0 and delta0 must be >= 0 and finite");
    if (config.diag_every < 0)
        throw std::invalid_argument("config: diag_every must be >= 0");
    for (double t : config.snapshot_times)
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::invalid_argument("config: snapshot times must be >= 0 and finite");

    const double bound = 0.25 * mesh.dx * mesh.dx / maxw.m2;
    if (config.dt > bound) {
        if (config.allow_unstable_dt) {
            std::fprintf(stderr,
                         "warning: dt = %g exceeds the parabolic bound %g "
                         "(allow_unstable_dt set; proceeding)\n",
                         config.dt, bound);
        } else {
            throw std::invalid_argument("config: dt = " + fmt(config.dt) +
                                        " exceeds the parabolic bound " + fmt(bound) +
                                        " (set allow_unstable_dt to override)");
        }
    }
}

RunConfig parse_config_text(std::string_view text)
{
    RunConfig config;
    std::stringstream ss{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value': " + stripped);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "solver") config.solver = solver_from_string(value);
        else if (key == "case") config.case_id = static_cast<int>(parse_long(key, value));
        else if (key == "epsilon") config.epsilon = parse_double(key, value);
        else if (key == "eps_profile") config.eps_profile = eps_kind_from_string(value);
        else if (key == "nx") config.nx = static_cast<int>(parse_long(key, value));
        else if (key == "nv") config.nv = static_cast<int>(parse_long(key, value));
        else if (key == "x_star") config.x_star = parse_double(key, value);
        else if (key == "v_star") config.v_star = parse_double(key, value);
        else if (key == "dt") config.dt = parse_double(key, value);
        else if (key == "t_final") config.t_final = parse_double(key, value);
        else if (key == "eta0") config.eta0 = parse_double(key, value);
        else if (key == "delta0") config.delta0 = parse_double(key, value);
        else if (key == "out_dir") config.out_dir = value;
        else if (key == "snapshots") config.snapshot_times = parse_times(key, value);
        else if (key == "seed") config.seed = parse_ulong(key, value);
        else if (key == "diag_every") config.diag_every = parse_long(key, value);
        else if (key == "allow_unstable_dt") config.allow_unstable_dt = parse_bool(key, value);
        else
            throw std::invalid_argument("config: unknown key '" + key + "' on line " +
                                        std::to_string(lineno));
    }
    return config;
}

RunConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string echo_config(const RunConfig& config)
{
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    };
    kv("solver", to_string(config.solver));
    kv("case", std::to_string(config.case_id));
    kv("epsilon", fmt(config.epsilon));
    kv("eps_profile", to_string(config.eps_profile));
    kv("nx", std::to_string(config.nx));
    kv("nv", std::to_string(config.nv));
    kv("x_star", fmt(config.x_star));
    kv("v_star", fmt(config.v_star));
    kv("dt", fmt(config.dt));
    kv("t_final", fmt(config.t_final));
    kv("eta0", fmt(config.eta0));
    kv("delta0", fmt(config.delta0));
    kv("out_dir", config.out_dir);
    std::string times;
    for (std::size_t k = 0; k < config.snapshot_times.size(); ++k) {
        if (k) times += ",";
        times += fmt(config.snapshot_times[k]);
    }
    kv("snapshots", times);
    kv("seed", std::to_string(config.seed));
    kv("diag_every", std::to_string(config.diag_every));
    kv("allow_unstable_dt", config.allow_unstable_dt ? "true" : "false");
    return out;
}

}  // namespace vbgk
