#include "graphkdv/config.hpp"

#include <algorithm>
#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace graphkdv {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s{
        {"graph", {"m", "n", "alpha", "beta"}},
        {"discretization", {"L", "N"}},
        {"vertex", {"Z", "sweep"}},
        {"task", {"name"}},
        {"modes", {"coarse_N", "window"}},
        {"evolution", {"dt", "T", "seed"}},
        {"resolvent", {"lambda_re", "lambda_im", "group_time", "bromwich"}},
        {"tolerances",
         {"vertex", "stationarity", "eigen_residual", "mode_residual", "symmetry", "growth_fit", "resolvent",
          "norm_drift", "group_agreement", "invariance", "s4"}},
        {"output", {"dir"}},
    };
    return s;
}

template <class T>
T parse_scalar(const std::string& field, const std::string& raw) {
    std::istringstream is(boost::trim_copy(raw));
    T v{};
    is >> v;
    if (is.fail() || !is.eof()) throw ConfigError(field, "cannot parse '" + raw + "'");
    return v;
}

std::vector<double> parse_list(const std::string& field, const std::string& raw) {
    std::vector<std::string> parts;
    boost::split(parts, raw, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (const auto& p : parts)
        if (!boost::trim_copy(p).empty()) out.push_back(parse_scalar<double>(field, p));
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
}

bool parse_bool(const std::string& field, const std::string& raw) {
    const std::string v = boost::to_lower_copy(boost::trim_copy(raw));
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(field, "expected a boolean, got '" + raw + "'");
}

}  // namespace

const std::vector<std::string>& task_names() {
    static const std::vector<std::string> t{"profile", "spectrum", "modes", "evolve", "resolvent", "audit", "all", "sweep"};
    return t;
}

std::vector<double> RunConfig::edge_alpha() const {
    return alpha.size() == 1 ? std::vector<double>(m + n, alpha[0]) : alpha;
}
std::vector<double> RunConfig::edge_beta() const {
    return beta.size() == 1 ? std::vector<double>(m + n, beta[0]) : beta;
}

void RunConfig::validate() const {
    if (m < 1) throw ConfigError("graph.m", "must be >= 1");
    if (n < 1) throw ConfigError("graph.n", "must be >= 1");
    if (alpha.size() != 1 && static_cast<int>(alpha.size()) != m + n)
        throw ConfigError("graph.alpha", "needs 1 or m + n entries");
    if (beta.size() != 1 && static_cast<int>(beta.size()) != m + n)
        throw ConfigError("graph.beta", "needs 1 or m + n entries");
    for (double a : alpha)
        if (!(a > 0.0)) throw ConfigError("graph.alpha", "entries must be positive");
    if (!(L > 0.0)) throw ConfigError("discretization.L", "must be positive");
    if (N < 16) throw ConfigError("discretization.N", "must be >= 16");
    if (std::find(task_names().begin(), task_names().end(), task) == task_names().end())
        throw ConfigError("task.name", "unknown task '" + task + "'");
    if (task == "sweep" && sweep.empty()) throw ConfigError("vertex.sweep", "the sweep task needs a nonempty list");
    if (coarse_N < 16) throw ConfigError("modes.coarse_N", "must be >= 16");
    if (!(window > 0.0)) throw ConfigError("modes.window", "must be positive");
    if (!(dt > 0.0)) throw ConfigError("evolution.dt", "must be positive");
    if (T < 0.0) throw ConfigError("evolution.T", "must be >= 0");
    if (!(lambda_re > 0.0)) throw ConfigError("resolvent.lambda_re", "must be positive");
    if (!(group_time > 0.0)) throw ConfigError("resolvent.group_time", "must be positive");
    if (output_dir.empty()) throw ConfigError("output.dir", "must not be empty");
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("<file>", std::string("line ") + std::to_string(e.line()) + ": " + e.message());
    }
    const auto& sch = schema();
    RunConfig c;
    for (const auto& [section, body] : tree) {
        auto it = sch.find(section);
        if (it == sch.end()) {
            if (!body.data().empty()) throw ConfigError(section, "keys must live inside a [section]");
            throw ConfigError(section, "unknown section");
        }
        for (const auto& [key, node] : body) {
            const std::string field = section + "." + key;
            if (!it->second.count(key)) throw ConfigError(field, "unknown key");
            const std::string v = node.get_value<std::string>();
            if (field == "graph.m") c.m = parse_scalar<int>(field, v);
            else if (field == "graph.n") c.n = parse_scalar<int>(field, v);
            else if (field == "graph.alpha") c.alpha = parse_list(field, v);
            else if (field == "graph.beta") c.beta = parse_list(field, v);
            else if (field == "discretization.L") c.L = parse_scalar<double>(field, v);
            else if (field == "discretization.N") c.N = parse_scalar<int>(field, v);
            else if (field == "vertex.Z") c.Z = parse_scalar<double>(field, v);
            else if (field == "vertex.sweep") c.sweep = parse_list(field, v);
            else if (field == "task.name") c.task = boost::trim_copy(v);
            else if (field == "modes.coarse_N") c.coarse_N = parse_scalar<int>(field, v);
            else if (field == "modes.window") c.window = parse_scalar<double>(field, v);
            else if (field == "evolution.dt") c.dt = parse_scalar<double>(field, v);
            else if (field == "evolution.T") c.T = parse_scalar<double>(field, v);
            else if (field == "evolution.seed") c.seed = parse_scalar<std::uint32_t>(field, v);
            else if (field == "resolvent.lambda_re") c.lambda_re = parse_scalar<double>(field, v);
            else if (field == "resolvent.lambda_im") c.lambda_im = parse_scalar<double>(field, v);
            else if (field == "resolvent.group_time") c.group_time = parse_scalar<double>(field, v);
            else if (field == "resolvent.bromwich") c.bromwich = parse_bool(field, v);
            else if (field == "output.dir") c.output_dir = boost::trim_copy(v);
            else if (section == "tolerances") {
                const double t = parse_scalar<double>(field, v);
                if (!(t > 0.0)) throw ConfigError(field, "must be positive");
                Tolerances& tl = c.tol;
                if (key == "vertex") tl.vertex = t;
                else if (key == "stationarity") tl.stationarity = t;
                else if (key == "eigen_residual") tl.eigen_residual = t;
                else if (key == "mode_residual") tl.mode_residual = t;
                else if (key == "symmetry") tl.symmetry = t;
                else if (key == "growth_fit") tl.growth_fit = t;
                else if (key == "resolvent") tl.resolvent = t;
                else if (key == "norm_drift") tl.norm_drift = t;
                else if (key == "group_agreement") tl.group_agreement = t;
                else if (key == "invariance") tl.invariance = t;
                else if (key == "s4") tl.s4 = t;
            }
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace graphkdv
