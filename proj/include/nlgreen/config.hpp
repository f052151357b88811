// Run configuration shared by the CLI subcommands; round-trips losslessly
// through a flat key=value file.
#ifndef NLGREEN_CONFIG_HPP
#define NLGREEN_CONFIG_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nlgreen {

struct RunConfig {
    std::string subcommand;        // check | green | solve | bench | catalog
    std::string nonlin = "sinh(w)";
    std::string forcing = "delta";
    double s = 1.0;
    int K = 4;
    std::string strategy = "lsq";  // match | lsq
    double rtol = 1e-10;
    double atol = 1e-12;
    int grid_n = 101;
    double grid_t0 = 0.0;
    double grid_t1 = 1.0;
    double eta = 1e-3;
    double t_fit = 0.5;
    double liouville_eps = 1.0;
    bool liouville = false;
    double t_max = 1.0;            // green horizon
    double tol = 1e-9;             // membership tolerance
    int samples = 20;              // membership sample paths
    std::string out;               // output path ("" = stdout)
    std::uint64_t seed = 1437;

    std::vector<double> make_grid() const {
        std::vector<double> g;
        g.reserve(static_cast<std::size_t>(grid_n));
        if (grid_n == 1) {
            g.push_back(grid_t0);
            return g;
        }
        for (int i = 0; i < grid_n; ++i)
            g.push_back(grid_t0 + (grid_t1 - grid_t0) * i / (grid_n - 1.0));
        return g;
    }

    std::string to_kv() const {
        auto g17 = [](double v) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        std::ostringstream os;
        os << "subcommand=" << subcommand << '\n'
           << "nonlin=" << nonlin << '\n'
           << "forcing=" << forcing << '\n'
           << "s=" << g17(s) << '\n'
           << "K=" << K << '\n'
           << "strategy=" << strategy << '\n'
           << "rtol=" << g17(rtol) << '\n'
           << "atol=" << g17(atol) << '\n'
           << "grid=" << grid_n << ',' << g17(grid_t0) << ',' << g17(grid_t1) << '\n'
           << "eta=" << g17(eta) << '\n'
           << "t_fit=" << g17(t_fit) << '\n'
           << "liouville=" << (liouville ? 1 : 0) << '\n'
           << "liouville_eps=" << g17(liouville_eps) << '\n'
           << "t_max=" << g17(t_max) << '\n'
           << "tol=" << g17(tol) << '\n'
           << "samples=" << samples << '\n'
           << "out=" << out << '\n'
           << "seed=" << seed << '\n';
        return os.str();
    }

    static RunConfig from_kv(std::istream& in) {
        RunConfig c;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("config: malformed line '" + line + "'");
            std::string key = line.substr(0, eq), val = line.substr(eq + 1);
            if (key == "subcommand") c.subcommand = val;
            else if (key == "nonlin") c.nonlin = val;
            else if (key == "forcing") c.forcing = val;
            else if (key == "s") c.s = std::stod(val);
            else if (key == "K") c.K = std::stoi(val);
            else if (key == "strategy") c.strategy = val;
            else if (key == "rtol") c.rtol = std::stod(val);
            else if (key == "atol") c.atol = std::stod(val);
            else if (key == "grid") {
                std::istringstream gs(val);
                std::string part;
                std::getline(gs, part, ',');
                c.grid_n = std::stoi(part);
                std::getline(gs, part, ',');
                c.grid_t0 = std::stod(part);
                std::getline(gs, part, ',');
                c.grid_t1 = std::stod(part);
            } else if (key == "eta") c.eta = std::stod(val);
            else if (key == "t_fit") c.t_fit = std::stod(val);
            else if (key == "liouville") c.liouville = val == "1" || val == "true";
            else if (key == "liouville_eps") c.liouville_eps = std::stod(val);
            else if (key == "t_max") c.t_max = std::stod(val);
            else if (key == "tol") c.tol = std::stod(val);
            else if (key == "samples") c.samples = std::stoi(val);
            else if (key == "out") c.out = val;
            else if (key == "seed") c.seed = std::stoull(val);
            else throw std::runtime_error("config: unknown key '" + key + "'");
        }
        return c;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("config: cannot open " + path);
        return from_kv(f);
    }
    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("config: cannot open " + path);
        f << to_kv();
    }
};

inline bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.to_kv() == b.to_kv();
}

}  // namespace nlgreen

#endif  // NLGREEN_CONFIG_HPP
