#include "ndsg/run_config.hpp"

#include "ndsg/csv.hpp"

#include <charconv>
#include <map>
#include <sstream>

namespace ndsg {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& s) {
    double v{};
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || p != end)
        throw ConfigError("config: bad number for " + key + ": '" + s + "'");
    return v;
}

long to_long(const std::string& key, const std::string& s) {
    long v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ConfigError("config: bad integer for " + key + ": '" + s + "'");
    return v;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig c;
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line, section;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config: malformed section: " + line);
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value: " + line);
        const std::string key = section + "." + trim(line.substr(0, eq));
        kv[key] = trim(line.substr(eq + 1));
    }

    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) return "";
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_d = [&](const std::string& key, double& slot) {
        const std::string v = take(key);
        if (!v.empty()) slot = to_double(key, v);
    };

    {
        const std::string v = take("run.name");
        if (!v.empty()) c.name = v;
    }
    take_d("model.lambda", c.model.lambda);
    take_d("model.A", c.model.A);
    take_d("grid.zeta_min", c.zeta_min);
    take_d("grid.zeta_max", c.zeta_max);
    take_d("grid.h", c.h);
    take_d("time.dt", c.dt);
    take_d("time.tau_final", c.tau_final);
    take_d("time.record_dt", c.record_dt);
    {
        const std::string kind = take("initial.kind");
        if (kind == "traveling")
            c.initial.kind = InitialKind::traveling;
        else if (kind == "sg_like")
            c.initial.kind = InitialKind::sg_like;
        else if (kind == "local_dsg")
            c.initial.kind = InitialKind::local_dsg;
        else if (!kind.empty())
            throw ConfigError("config: unknown initial.kind '" + kind + "'");
    }
    take_d("initial.v", c.initial.v);
    take_d("initial.gamma", c.initial.gamma);
    {
        const std::string v = take("initial.branch");
        if (!v.empty()) c.initial.branch = static_cast<int>(to_long("initial.branch", v));
    }
    take_d("initial.center", c.initial.center);
    take_d("sponge.fraction", c.sponge.fraction);
    take_d("sponge.sigma_max", c.sponge.sigma_max);
    {
        const std::string v = take("output.directory");
        if (!v.empty()) c.output_dir = v;
    }
    {
        const std::string v = take("output.snapshots");
        if (!v.empty()) {
            std::istringstream ss(v);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (!tok.empty()) c.snapshot_times.push_back(to_double("output.snapshots", tok));
            }
        }
    }
    {
        const std::string v = take("misc.seed");
        if (!v.empty()) c.seed = static_cast<unsigned long>(to_long("misc.seed", v));
    }

    if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
    c.validate();
    return c;
}

std::string serialize_run_config(const RunConfig& c) {
    std::ostringstream os;
    os << "[run]\n";
    os << "name = " << c.name << "\n";
    os << "\n[model]\n";
    os << "lambda = " << format_double(c.model.lambda) << "\n";
    os << "A = " << format_double(c.model.A) << "\n";
    os << "\n[grid]\n";
    os << "zeta_min = " << format_double(c.zeta_min) << "\n";
    os << "zeta_max = " << format_double(c.zeta_max) << "\n";
    os << "h = " << format_double(c.h) << "\n";
    os << "\n[time]\n";
    os << "dt = " << format_double(c.dt) << "\n";
    os << "tau_final = " << format_double(c.tau_final) << "\n";
    os << "record_dt = " << format_double(c.record_dt) << "\n";
    os << "\n[initial]\n";
    os << "kind = "
       << (c.initial.kind == InitialKind::traveling
               ? "traveling"
               : c.initial.kind == InitialKind::sg_like ? "sg_like" : "local_dsg")
       << "\n";
    os << "v = " << format_double(c.initial.v) << "\n";
    os << "gamma = " << format_double(c.initial.gamma) << "\n";
    os << "branch = " << c.initial.branch << "\n";
    os << "center = " << format_double(c.initial.center) << "\n";
    os << "\n[sponge]\n";
    os << "fraction = " << format_double(c.sponge.fraction) << "\n";
    os << "sigma_max = " << format_double(c.sponge.sigma_max) << "\n";
    os << "\n[output]\n";
    os << "directory = " << c.output_dir << "\n";
    os << "snapshots = ";
    for (std::size_t i = 0; i < c.snapshot_times.size(); ++i) {
        if (i) os << ",";
        os << format_double(c.snapshot_times[i]);
    }
    os << "\n";
    os << "\n[misc]\n";
    os << "seed = " << c.seed << "\n";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return s;
}

}  // namespace ndsg
