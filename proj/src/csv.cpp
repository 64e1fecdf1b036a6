#include "crawlsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace crawlsim {

namespace {

void append_g17(std::string& out, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
}

std::string samples_csv(const std::vector<double>& times, const std::vector<Vector>& states,
                        const std::string& header) {
    std::string out = header;
    out += '\n';
    for (std::size_t j = 0; j < times.size(); ++j) {
        append_g17(out, times[j]);
        for (Eigen::Index i = 0; i < states[j].size(); ++i) {
            out += ',';
            append_g17(out, states[j][i]);
        }
        out += '\n';
    }
    return out;
}

std::string reduced_header(int n) {
    std::string header = "t";
    for (int i = 1; i < n; ++i) header += ",z" + std::to_string(i);
    for (int i = 1; i <= n; ++i) header += ",v" + std::to_string(i);
    return header;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string header;
    if (traj.kind == SystemKind::full) {
        header = "t";
        for (int i = 1; i <= traj.block_count; ++i) header += ",x" + std::to_string(i);
        for (int i = 1; i <= traj.block_count; ++i) header += ",v" + std::to_string(i);
    } else {
        header = reduced_header(traj.block_count);
    }
    return samples_csv(traj.times, traj.states, header);
}

std::string cycle_csv(const LimitCycle& cycle) {
    return samples_csv(cycle.times, cycle.samples, reduced_header(cycle.block_count));
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw std::runtime_error("cannot write " + tmp.string());
        stream << content;
    }
    fs::rename(tmp, path);
}

}  // namespace crawlsim
