#include "syv/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace syv {

namespace {

struct KV {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const
    {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string str(const std::string& sec, const std::string& key,
                    const std::string& fallback) const
    {
        auto s = sections.find(sec);
        if (s == sections.end()) return fallback;
        auto k = s->second.find(key);
        return k == s->second.end() ? fallback : k->second;
    }
    double num(const std::string& sec, const std::string& key, double fallback) const
    {
        const std::string v = str(sec, key, "");
        if (v.empty()) return fallback;
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            throw std::runtime_error("config: bad number for " + sec + "." + key);
        return x;
    }
    int integer(const std::string& sec, const std::string& key, int fallback) const
    {
        const double x = num(sec, key, fallback);
        return static_cast<int>(x);
    }
};

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s)
{
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        return s.substr(1, s.size() - 2);
    return s;
}

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

std::string fmt_num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

KV parse_kv(const std::string& text)
{
    KV kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) {
            // allow # inside quoted strings
            const std::size_t q1 = line.find('"');
            if (q1 == std::string::npos || hash < q1)
                line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error("config: malformed section at line " +
                                         std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: expected key = value at line " +
                                     std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (section.empty())
            throw std::runtime_error("config: key outside any section at line " +
                                     std::to_string(lineno));
        kv.sections[section][key] = value;
    }
    return kv;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    const KV kv = parse_kv(text);
    RunConfig c;

    c.command = kv.str("run", "command", c.command);
    c.n = kv.integer("run", "n", c.n);
    c.mode = kv.str("run", "mode", c.mode);
    c.threads = kv.integer("run", "threads", c.threads);
    c.seed = static_cast<unsigned>(kv.num("run", "seed", c.seed));

    c.ambient_kind = kv.str("ambient", "kind", c.ambient_kind);
    c.curvature = kv.num("ambient", "curvature", c.curvature);
    c.ambient_omega = kv.str("ambient", "omega", c.ambient_omega);

    c.preset = kv.str("surface", "preset", c.preset);
    c.pa = kv.num("surface", "a", c.pa);
    c.pb = kv.num("surface", "b", c.pb);
    c.pc = kv.num("surface", "c", c.pc);
    c.topology = kv.str("surface", "topology", c.topology);
    c.orientation = kv.str("surface", "orientation", c.orientation);
    for (const char* key : {"embed_x", "embed_y", "embed_z", "embed_w"}) {
        if (kv.has("surface", key))
            c.embedding.push_back(kv.str("surface", key, ""));
    }
    if (kv.has("surface", "orientation_point")) {
        std::istringstream pt(kv.str("surface", "orientation_point", ""));
        double x;
        while (pt >> x) {
            c.orientation_point.push_back(x);
            if (pt.peek() == ',') pt.get();
        }
    }

    c.nu = kv.integer("grid", "nu", c.nu);
    c.nv = kv.integer("grid", "nv", c.nv);

    c.collar_order = kv.integer("collar", "order", c.collar_order);
    c.collar_file = kv.str("collar", "file", c.collar_file);
    c.emit_collar = kv.str("collar", "emit", "false") == "true";

    c.omega = kv.str("anomaly", "omega", c.omega);

    c.f = kv.str("vary", "f", c.f);
    c.t0 = kv.num("vary", "t0", c.t0);

    c.model = kv.str("probe", "model", c.model);
    c.eps_min = kv.num("probe", "eps_min", c.eps_min);
    c.eps_max = kv.num("probe", "eps_max", c.eps_max);
    c.samples = kv.integer("probe", "samples", c.samples);

    c.sweep_parameter = kv.str("sweep", "parameter", c.sweep_parameter);
    c.sweep_from = kv.num("sweep", "from", c.sweep_from);
    c.sweep_to = kv.num("sweep", "to", c.sweep_to);
    c.sweep_steps = kv.integer("sweep", "steps", c.sweep_steps);

    c.out_json = kv.str("output", "json", c.out_json);
    c.out_csv = kv.str("output", "csv", c.out_csv);

    c.tol_scale = kv.num("tolerances", "scale", c.tol_scale);

    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c)
{
    std::ostringstream out;
    out << "[run]\n";
    out << "command = " << c.command << "\n";
    out << "n = " << c.n << "\n";
    out << "mode = " << c.mode << "\n";
    out << "threads = " << c.threads << "\n";
    out << "seed = " << c.seed << "\n";

    out << "\n[ambient]\n";
    out << "kind = " << c.ambient_kind << "\n";
    out << "curvature = " << fmt_num(c.curvature) << "\n";
    if (!c.ambient_omega.empty())
        out << "omega = " << quoted(c.ambient_omega) << "\n";

    out << "\n[surface]\n";
    out << "preset = " << c.preset << "\n";
    out << "a = " << fmt_num(c.pa) << "\n";
    out << "b = " << fmt_num(c.pb) << "\n";
    out << "c = " << fmt_num(c.pc) << "\n";
    out << "topology = " << c.topology << "\n";
    out << "orientation = " << c.orientation << "\n";
    const char* embed_keys[] = {"embed_x", "embed_y", "embed_z", "embed_w"};
    for (std::size_t i = 0; i < c.embedding.size() && i < 4; ++i)
        out << embed_keys[i] << " = " << quoted(c.embedding[i]) << "\n";
    if (!c.orientation_point.empty()) {
        out << "orientation_point = ";
        for (std::size_t i = 0; i < c.orientation_point.size(); ++i)
            out << (i ? ", " : "") << fmt_num(c.orientation_point[i]);
        out << "\n";
    }

    out << "\n[grid]\n";
    out << "nu = " << c.nu << "\n";
    out << "nv = " << c.nv << "\n";

    out << "\n[collar]\n";
    out << "order = " << c.collar_order << "\n";
    if (!c.collar_file.empty())
        out << "file = " << c.collar_file << "\n";
    out << "emit = " << (c.emit_collar ? "true" : "false") << "\n";

    if (!c.omega.empty()) {
        out << "\n[anomaly]\n";
        out << "omega = " << quoted(c.omega) << "\n";
    }

    out << "\n[vary]\n";
    out << "f = " << quoted(c.f) << "\n";
    out << "t0 = " << fmt_num(c.t0) << "\n";

    out << "\n[probe]\n";
    out << "model = " << c.model << "\n";
    out << "eps_min = " << fmt_num(c.eps_min) << "\n";
    out << "eps_max = " << fmt_num(c.eps_max) << "\n";
    out << "samples = " << c.samples << "\n";

    out << "\n[sweep]\n";
    out << "parameter = " << c.sweep_parameter << "\n";
    out << "from = " << fmt_num(c.sweep_from) << "\n";
    out << "to = " << fmt_num(c.sweep_to) << "\n";
    out << "steps = " << c.sweep_steps << "\n";

    out << "\n[output]\n";
    if (!c.out_json.empty()) out << "json = " << c.out_json << "\n";
    if (!c.out_csv.empty()) out << "csv = " << c.out_csv << "\n";

    out << "\n[tolerances]\n";
    out << "scale = " << fmt_num(c.tol_scale) << "\n";
    return out.str();
}

} // namespace syv
