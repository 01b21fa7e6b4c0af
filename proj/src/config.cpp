#include "preb/config.hpp"

#include "preb/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace preb {

namespace {

namespace pt = boost::property_tree;

const std::set<std::string> system_keys{"hopping", "hamiltonian", "coupling1", "coupling2"};
const std::set<std::string> bath_keys{"kind", "kappa", "lambda", "omega0", "cutoff", "level",
                                      "table", "interpolate", "beta", "mu"};
const std::set<std::string> process_keys{"tau", "l0", "tau_r_factor", "depth", "n_modes",
                                         "method", "grid_points", "tail_tolerance"};
const std::set<std::string> sweep_keys{"axis", "min", "max", "points", "spacing"};

void check_keys(const pt::ptree& section, const std::string& name, const std::set<std::string>& allowed)
{
    for (const auto& [key, value] : section) {
        if (!allowed.contains(key))
            throw ConfigError("config: unknown key '" + key + "' in [" + name + "]");
    }
}

double get_number(const pt::ptree& section, const std::string& section_name, const std::string& key,
                  double fallback)
{
    auto v = section.get_optional<std::string>(key);
    if (!v)
        return fallback;
    try {
        std::size_t pos = 0;
        double x = std::stod(*v, &pos);
        if (pos != v->size() || !std::isfinite(x))
            throw std::invalid_argument(*v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + section_name + "] " + key + " is not a number: '" + *v + "'");
    }
}

int get_int(const pt::ptree& section, const std::string& section_name, const std::string& key, int fallback)
{
    double x = get_number(section, section_name, key, fallback);
    if (x != std::floor(x) || std::abs(x) > 1e9)
        throw ConfigError("config: [" + section_name + "] " + key + " must be an integer");
    return static_cast<int>(x);
}

RMatrix parse_matrix(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::stringstream all(text);
    std::string row_text;
    while (std::getline(all, row_text, ';')) {
        std::stringstream rs(row_text);
        std::vector<double> row;
        std::string tok;
        while (rs >> tok) {
            try {
                row.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("config: [system] hamiltonian entry '" + tok + "' is not a number");
            }
        }
        if (!row.empty())
            rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ConfigError("config: [system] hamiltonian is empty");
    const auto n = static_cast<Eigen::Index>(rows.size());
    RMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != n)
            throw ConfigError("config: [system] hamiltonian must be square (rows separated by ';')");
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return m;
}

BathConfig parse_bath(const pt::ptree& s, const std::string& name, const BathConfig& defaults,
                      const std::string& base_dir)
{
    check_keys(s, name, bath_keys);
    BathConfig b = defaults;
    b.thermal.beta = get_number(s, name, "beta", defaults.thermal.beta);
    b.thermal.mu = get_number(s, name, "mu", defaults.thermal.mu);

    const SpectralFunction& d = defaults.spectral;
    std::string kind = s.get<std::string>("kind", "lorentzian");
    if (kind == "lorentzian") {
        b.spectral = SpectralFunction::lorentzian(get_number(s, name, "kappa", d.kappa()),
                                                  get_number(s, name, "lambda", d.width()),
                                                  get_number(s, name, "omega0", d.center()),
                                                  get_number(s, name, "cutoff", d.cutoff()));
    } else if (kind == "flat") {
        b.spectral = SpectralFunction::flat(get_number(s, name, "level", 1.0),
                                            get_number(s, name, "cutoff", d.cutoff()));
    } else if (kind == "tabulated") {
        auto table = s.get_optional<std::string>("table");
        if (!table)
            throw ConfigError("config: [" + name + "] tabulated kind needs a 'table' path");
        std::filesystem::path p(*table);
        if (p.is_relative())
            p = std::filesystem::path(base_dir) / p;
        std::ifstream in(p);
        if (!in)
            throw ConfigError("config: cannot open spectral table " + p.string());
        std::string interp = s.get<std::string>("interpolate", "true");
        if (interp != "true" && interp != "false")
            throw ConfigError("config: [" + name + "] interpolate must be true or false");
        b.spectral = read_spectral_csv(in, interp == "true");
    } else {
        throw ConfigError("config: [" + name + "] unknown kind '" + kind + "'");
    }
    return b;
}

SweepSpec::Axis parse_axis(const std::string& s)
{
    if (s == "tau")
        return SweepSpec::Axis::tau;
    if (s == "lambda")
        return SweepSpec::Axis::lambda;
    if (s == "mu")
        return SweepSpec::Axis::mu;
    if (s == "beta1")
        return SweepSpec::Axis::beta1;
    throw ConfigError("config: [sweep] unknown axis '" + s + "'");
}

RunConfig preset(double width, double beta1, double beta2)
{
    RunConfig c;
    c.baths[0].spectral = SpectralFunction::lorentzian(2.0, width, 2.0, 6.0);
    c.baths[0].thermal = {beta1, -2.0};
    c.baths[1].spectral = SpectralFunction::lorentzian(2.0, width, -1.0, 6.0);
    c.baths[1].thermal = {beta2, -2.0};
    return c;
}

} // namespace

std::string to_string(SweepSpec::Axis axis)
{
    switch (axis) {
    case SweepSpec::Axis::tau:
        return "tau";
    case SweepSpec::Axis::lambda:
        return "lambda";
    case SweepSpec::Axis::mu:
        return "mu";
    case SweepSpec::Axis::beta1:
        return "beta1";
    }
    return "tau";
}

void SweepSpec::validate() const
{
    if (!(min < max))
        throw ConfigError("sweep: min must be below max");
    if (points < 2)
        throw ConfigError("sweep: need at least 2 points");
    if (log_spacing && !(min > 0.0))
        throw ConfigError("sweep: log spacing needs a positive range");
}

std::vector<double> SweepSpec::values() const
{
    validate();
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(points - 1);
        v[static_cast<std::size_t>(i)] = log_spacing ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                                                     : min + t * (max - min);
    }
    v.front() = min;
    v.back() = max;
    return v;
}

void RunConfig::validate() const
{
    system.validate();
    if (!(process.tau > 0.0) || !std::isfinite(process.tau))
        throw ConfigError("config: tau must be positive");
    if (process.l0 < 0)
        throw ConfigError("config: l0 must be non-negative");
    if (!(process.tau_r_factor > 0.0))
        throw ConfigError("config: tau_r_factor must be positive");
    if (process.depth < 0 || process.n_modes < 0)
        throw ConfigError("config: depth and n_modes must be non-negative");
    if (process.grid_points < 3)
        throw ConfigError("config: grid_points must be at least 3");
    if (!(process.tail_tolerance > 0.0))
        throw ConfigError("config: tail_tolerance must be positive");
    for (const auto& b : baths) {
        if (!(b.thermal.beta > 0.0) || !std::isfinite(b.thermal.beta))
            throw ConfigError("config: beta must be positive");
        if (!std::isfinite(b.thermal.mu))
            throw ConfigError("config: mu must be finite");
    }
    if (sweep)
        sweep->validate();
}

RunConfig heat_engine_preset(double width)
{
    return preset(width, 0.1, 1.0);
}

RunConfig refrigerator_preset(double width)
{
    return preset(width, 0.7, 1.0);
}

RunConfig equal_bath_preset(double width)
{
    return preset(width, 1.0, 1.0);
}

RunConfig parse_config(std::istream& is, const std::string& base_dir)
{
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto& [name, section] : tree) {
        if (name != "system" && name != "bath1" && name != "bath2" && name != "process" && name != "sweep")
            throw ConfigError("config: unknown section [" + name + "]");
        if (section.empty() && !section.data().empty())
            throw ConfigError("config: key '" + name + "' outside of a section");
    }

    RunConfig cfg = heat_engine_preset();
    const pt::ptree empty;

    const pt::ptree& sys = tree.get_child("system", empty);
    check_keys(sys, "system", system_keys);
    if (auto h = sys.get_optional<std::string>("hamiltonian")) {
        if (sys.count("hopping"))
            throw ConfigError("config: [system] give either hopping or hamiltonian");
        cfg.system.hamiltonian = parse_matrix(*h);
    } else {
        cfg.system = SystemSpec::two_site(get_number(sys, "system", "hopping", 1.0));
    }
    const int last = cfg.system.sites() - 1;
    cfg.system.coupling_sites = {get_int(sys, "system", "coupling1", 0), get_int(sys, "system", "coupling2", last)};

    cfg.baths[0] = parse_bath(tree.get_child("bath1", empty), "bath1", cfg.baths[0], base_dir);
    cfg.baths[1] = parse_bath(tree.get_child("bath2", empty), "bath2", cfg.baths[1], base_dir);

    const pt::ptree& proc = tree.get_child("process", empty);
    check_keys(proc, "process", process_keys);
    ProcessConfig& p = cfg.process;
    p.tau = get_number(proc, "process", "tau", p.tau);
    p.l0 = get_int(proc, "process", "l0", p.l0);
    p.tau_r_factor = get_number(proc, "process", "tau_r_factor", p.tau_r_factor);
    p.depth = get_int(proc, "process", "depth", p.depth);
    p.n_modes = get_int(proc, "process", "n_modes", p.n_modes);
    p.grid_points = get_int(proc, "process", "grid_points", p.grid_points);
    p.tail_tolerance = get_number(proc, "process", "tail_tolerance", p.tail_tolerance);
    std::string method = proc.get<std::string>("method", "tridiag");
    if (method == "tridiag")
        p.method = ChainMethod::tridiag;
    else if (method == "recursion")
        p.method = ChainMethod::recursion;
    else
        throw ConfigError("config: [process] unknown method '" + method + "'");

    if (auto sw = tree.get_child_optional("sweep")) {
        check_keys(*sw, "sweep", sweep_keys);
        SweepSpec s;
        s.axis = parse_axis(sw->get<std::string>("axis", "tau"));
        s.min = get_number(*sw, "sweep", "min", s.min);
        s.max = get_number(*sw, "sweep", "max", s.max);
        s.points = get_int(*sw, "sweep", "points", s.points);
        std::string spacing = sw->get<std::string>("spacing", "linear");
        if (spacing != "linear" && spacing != "log")
            throw ConfigError("config: [sweep] spacing must be linear or log");
        s.log_spacing = spacing == "log";
        cfg.sweep = s;
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path);
    std::string dir = std::filesystem::path(path).parent_path().string();
    return parse_config(in, dir.empty() ? "." : dir);
}

RunConfig with_width(const RunConfig& cfg, double width)
{
    RunConfig c = cfg;
    for (auto& b : c.baths) {
        const SpectralFunction& s = b.spectral;
        if (s.kind() != SpectralFunction::Kind::lorentzian)
            throw ConfigError("sweep: lambda axis needs lorentzian baths");
        b.spectral = SpectralFunction::lorentzian(s.kappa(), width, s.center(), s.cutoff());
    }
    return c;
}

RunConfig with_axis(const RunConfig& cfg, SweepSpec::Axis axis, double value)
{
    RunConfig c = cfg;
    switch (axis) {
    case SweepSpec::Axis::tau:
        c.process.tau = value;
        break;
    case SweepSpec::Axis::lambda:
        c = with_width(cfg, value);
        break;
    case SweepSpec::Axis::mu:
        c.baths[0].thermal.mu = value;
        c.baths[1].thermal.mu = value;
        break;
    case SweepSpec::Axis::beta1:
        c.baths[0].thermal.beta = value;
        break;
    }
    return c;
}

} // namespace preb
