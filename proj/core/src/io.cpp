#include "qnls/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qnls {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

} // namespace

void write_profile_csv(const std::string& path, const RadialField& u) {
    std::ofstream os = open_out(path);
    os << "r,u\n";
    for (std::size_t i = 0; i < u.size(); ++i)
        os << fmt17(u.grid().node(i)) << ',' << fmt17(u[i]) << '\n';
}

RadialField read_profile_csv(const std::string& path, int dimension) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open profile CSV: " + path);
    std::string line;
    std::getline(is, line); // header
    std::vector<double> r, v;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed profile CSV row: " + line);
        r.push_back(std::stod(line.substr(0, comma)));
        v.push_back(std::stod(line.substr(comma + 1)));
    }
    if (r.size() < 3)
        throw std::runtime_error("profile CSV too short: " + path);
    GridPtr grid = make_grid(dimension, r.back(), r.size());
    return RadialField(std::move(grid), std::move(v));
}

void write_report_json(const std::string& path, const SolveReport& report,
                       const std::string& profile_path) {
    nlohmann::json j;
    j["profile_path"] = profile_path;
    j["energy"] = report.energy;
    j["pohozaev_residual"] = report.pohozaev_residual;
    j["lambda"] = report.lambda;
    j["mass"] = report.mass;
    j["mu_schedule_used"] = report.mu_schedule_used;
    j["iterations_total"] = report.iterations_total;
    j["converged"] = report.converged;
    j["node_count"] = report.node_count;
    std::ofstream os = open_out(path);
    os << j.dump(2) << '\n';
}

StoredReport read_report_json(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open report JSON: " + path);
    nlohmann::json j;
    is >> j;
    StoredReport r;
    r.profile_path = j.at("profile_path").get<std::string>();
    r.energy = j.at("energy").get<double>();
    r.pohozaev_residual = j.at("pohozaev_residual").get<double>();
    r.lambda = j.at("lambda").get<double>();
    r.mass = j.at("mass").get<double>();
    r.mu_schedule_used = j.at("mu_schedule_used").get<std::vector<double>>();
    r.iterations_total = j.at("iterations_total").get<long>();
    r.converged = j.at("converged").get<bool>();
    r.node_count = j.at("node_count").get<int>();
    return r;
}

void write_critical_scan_csv(const std::string& path,
                             const std::vector<CriticalScanRow>& rows) {
    std::ofstream os = open_out(path);
    os << "a,classification,inf_fiber_energy\n";
    for (const auto& row : rows)
        os << fmt17(row.a) << ',' << row.classification << ','
           << fmt17(row.inf_fiber_energy) << '\n';
}

void write_concentration_csv(const std::string& path,
                             const std::vector<ConcentrationRow>& rows) {
    std::ofstream os = open_out(path);
    os << "delta,a_n,eps_n,w_l1,dist_l1,dist_l2\n";
    for (const auto& row : rows)
        os << fmt17(row.delta) << ',' << fmt17(row.a_n) << ',' << fmt17(row.eps_n)
           << ',' << fmt17(row.w_l1) << ',' << fmt17(row.dist_l1) << ','
           << fmt17(row.dist_l2) << '\n';
}

void write_xy(const std::string& path, const std::vector<double>& x,
              const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("write_xy: size mismatch");
    std::ofstream os = open_out(path);
    for (std::size_t i = 0; i < x.size(); ++i)
        os << fmt17(x[i]) << ' ' << fmt17(y[i]) << '\n';
}

} // namespace qnls
