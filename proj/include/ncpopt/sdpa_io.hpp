#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpopt/block_sdp.hpp"

namespace ncpopt {

struct SdpaIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace sdpa_detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// splits a line on whitespace and the separators , ( ) { }
inline std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '(' || c == ')' ||
            c == '{' || c == '}') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace sdpa_detail

/// Writes the problem in SDPA sparse format (.dat-s). The file encodes
///   min c^T x  s.t.  sum_i x_i F_i^file - F0^file >= 0
/// with c = -b, F0^file = -F0 and F_i^file = F_i, so the file's optimum is
/// the negative of the BlockSdp maximum and the optimal x equals y.
/// Diagonal blocks carry negative sizes; entries are 1-based upper
/// triangles printed with 17 significant digits.
inline void export_sdpa(const BlockSdp& sdp, std::ostream& os) {
    os << sdp.m << "\n";
    os << sdp.blocks.size() << "\n";
    for (size_t b = 0; b < sdp.blocks.size(); ++b) {
        if (b) os << " ";
        os << (sdp.blocks[b].diagonal ? -sdp.blocks[b].size : sdp.blocks[b].size);
    }
    os << "\n";
    for (int i = 0; i < sdp.m; ++i) {
        if (i) os << " ";
        os << sdpa_detail::fmt(-sdp.b[i]);
    }
    os << "\n";
    for (size_t b = 0; b < sdp.blocks.size(); ++b) {
        for (const auto& e : sdp.blocks[b].f0)
            if (e.value != 0.0)
                os << "0 " << b + 1 << " " << e.row + 1 << " " << e.col + 1 << " "
                   << sdpa_detail::fmt(-e.value) << "\n";
        for (const auto& [var, entries] : sdp.blocks[b].fs)
            for (const auto& e : entries)
                if (e.value != 0.0)
                    os << var + 1 << " " << b + 1 << " " << e.row + 1 << " " << e.col + 1 << " "
                       << sdpa_detail::fmt(e.value) << "\n";
    }
}

inline void export_sdpa(const BlockSdp& sdp, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw SdpaIoError("cannot open " + path + " for writing");
    export_sdpa(sdp, os);
}

/// Parses SDPA sparse format back into a BlockSdp (inverse of export_sdpa).
inline BlockSdp import_sdpa(std::istream& is) {
    using sdpa_detail::tokens;
    std::vector<std::string> toks;
    std::string line;
    std::vector<std::vector<std::string>> header_lines;
    // header: m, nblocks, sizes, c; skip comments
    while (header_lines.size() < 4 && std::getline(is, line)) {
        if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
        auto t = tokens(line);
        if (t.empty()) continue;
        header_lines.push_back(t);
    }
    if (header_lines.size() < 4) throw SdpaIoError("truncated SDPA header");
    BlockSdp sdp;
    sdp.m = std::stoi(header_lines[0].at(0));
    int nblocks = std::stoi(header_lines[1].at(0));
    if (static_cast<int>(header_lines[2].size()) < nblocks) throw SdpaIoError("bad block size line");
    sdp.blocks.resize(nblocks);
    for (int b = 0; b < nblocks; ++b) {
        int s = std::stoi(header_lines[2][b]);
        sdp.blocks[b].size = std::abs(s);
        sdp.blocks[b].diagonal = s < 0;
    }
    if (static_cast<int>(header_lines[3].size()) < sdp.m) throw SdpaIoError("bad objective line");
    sdp.b = Eigen::VectorXd::Zero(sdp.m);
    for (int i = 0; i < sdp.m; ++i) sdp.b[i] = -std::stod(header_lines[3][i]);

    std::vector<std::vector<std::map<std::pair<int, int>, double>>> acc(
        sdp.m + 1, std::vector<std::map<std::pair<int, int>, double>>(nblocks));
    while (std::getline(is, line)) {
        if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;
        auto t = tokens(line);
        if (t.empty()) continue;
        if (t.size() != 5) throw SdpaIoError("malformed entry line: " + line);
        int mat = std::stoi(t[0]), blk = std::stoi(t[1]), i = std::stoi(t[2]), j = std::stoi(t[3]);
        double v = std::stod(t[4]);
        if (mat < 0 || mat > sdp.m || blk < 1 || blk > nblocks) throw SdpaIoError("entry out of range");
        if (i > j) std::swap(i, j);
        acc[mat][blk - 1][{i - 1, j - 1}] += (mat == 0 ? -v : v);
    }
    for (int b = 0; b < nblocks; ++b) {
        for (const auto& [rc, v] : acc[0][b])
            if (v != 0.0) sdp.blocks[b].f0.push_back({rc.first, rc.second, v});
        for (int i = 1; i <= sdp.m; ++i) {
            if (acc[i][b].empty()) continue;
            std::vector<SdpEntry> es;
            for (const auto& [rc, v] : acc[i][b])
                if (v != 0.0) es.push_back({rc.first, rc.second, v});
            if (!es.empty()) sdp.blocks[b].fs.emplace_back(i - 1, std::move(es));
        }
    }
    return sdp;
}

inline BlockSdp import_sdpa(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw SdpaIoError("cannot open " + path);
    return import_sdpa(is);
}

/// Reads an SDPA solver output file (the .out of the reference sdpa
/// binary): phase.value, objValPrimal, objValDual and xVec. Returns the
/// solution translated back into BlockSdp orientation.
inline SdpSolution import_sdpa_result(std::istream& is) {
    SdpSolution sol;
    sol.status = SolveStatus::SlowProgress;
    std::string line;
    bool have_xvec = false, have_obj = false;
    while (std::getline(is, line)) {
        auto eq = line.find('=');
        if (line.find("phase.value") != std::string::npos) {
            if (line.find("pdOPT") != std::string::npos) sol.status = SolveStatus::Optimal;
            else if (line.find("pINF") != std::string::npos) sol.status = SolveStatus::PrimalInfeasible;
            else if (line.find("dINF") != std::string::npos) sol.status = SolveStatus::DualInfeasible;
        } else if (line.find("objValPrimal") != std::string::npos && eq != std::string::npos) {
            sol.dual_objective = -std::stod(line.substr(eq + 1));
            have_obj = true;
        } else if (line.find("objValDual") != std::string::npos && eq != std::string::npos) {
            sol.primal_objective = -std::stod(line.substr(eq + 1));
        } else if (line.find("xVec") != std::string::npos) {
            std::string payload = eq == std::string::npos ? "" : line.substr(eq + 1);
            while (payload.find('}') == std::string::npos && std::getline(is, line)) payload += line;
            auto toks = sdpa_detail::tokens(payload);
            sol.y = Eigen::VectorXd::Zero(toks.size());
            for (size_t i = 0; i < toks.size(); ++i) sol.y[i] = std::stod(toks[i]);
            have_xvec = true;
        }
    }
    if (!have_xvec || !have_obj) throw SdpaIoError("malformed result file: missing xVec/objValPrimal");
    return sol;
}

inline SdpSolution import_sdpa_result(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw SdpaIoError("cannot open " + path);
    return import_sdpa_result(is);
}

}  // namespace ncpopt
