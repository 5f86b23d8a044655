#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pir/errors.hpp"
#include "pir/geometry.hpp" // format_double
#include "pir/matrix.hpp"

namespace pir {

/// TSP instance: n cities with a full symmetric distance matrix, optionally
/// backed by 2D coordinates.
struct ProblemInstance {
    std::string name;
    std::size_t n = 0;
    std::vector<std::array<double, 2>> coords; // empty for matrix-only instances
    Matrix dist;
    double d_max = 0.0;
    bool degenerate = false; // some off-diagonal distance is zero

    double distance(std::size_t i, std::size_t j) const { return dist(i, j); }
};

namespace detail {

inline void finalize_instance(ProblemInstance& p) {
    p.n = p.dist.rows;
    p.d_max = 0.0;
    p.degenerate = false;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) {
            if (i != j && p.dist(i, j) <= 0.0) p.degenerate = true;
            p.d_max = p.dist(i, j) > p.d_max ? p.dist(i, j) : p.d_max;
        }
    }
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

/// Instance from 2D coordinates with exact (unrounded) Euclidean distances;
/// set tsplib_rounding for the TSPLIB EUC_2D nearest-integer convention.
inline ProblemInstance instance_from_coords(std::vector<std::array<double, 2>> coords,
                                            bool tsplib_rounding = false,
                                            std::string name = "") {
    if (coords.size() < 2) throw FormatError("instance needs at least 2 cities");
    ProblemInstance p;
    p.name = std::move(name);
    p.coords = std::move(coords);
    const std::size_t n = p.coords.size();
    p.dist = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = p.coords[i][0] - p.coords[j][0];
            const double dy = p.coords[i][1] - p.coords[j][1];
            double d = std::sqrt(dx * dx + dy * dy);
            if (tsplib_rounding) d = std::nearbyint(d);
            p.dist(i, j) = d;
            p.dist(j, i) = d;
        }
    }
    detail::finalize_instance(p);
    return p;
}

/// Instance from a full distance matrix; must be square, symmetric,
/// non-negative, zero on the diagonal.
inline ProblemInstance instance_from_matrix(Matrix d, std::string name = "") {
    if (d.rows < 2 || d.rows != d.cols) throw FormatError("distance matrix must be square, n >= 2");
    for (std::size_t i = 0; i < d.rows; ++i) {
        if (d(i, i) != 0.0) throw FormatError("distance matrix diagonal must be zero");
        for (std::size_t j = 0; j < d.cols; ++j) {
            if (d(i, j) < 0.0) throw FormatError("negative distance");
            if (d(i, j) != d(j, i)) throw FormatError("asymmetric distance matrix");
        }
    }
    ProblemInstance p;
    p.name = std::move(name);
    p.dist = std::move(d);
    detail::finalize_instance(p);
    return p;
}

/// {"coords": [[x, y], ...]}
inline ProblemInstance instance_from_json(const nlohmann::json& j, std::string name = "") {
    try {
        std::vector<std::array<double, 2>> coords;
        for (const auto& c : j.at("coords"))
            coords.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        return instance_from_coords(std::move(coords), false, std::move(name));
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("coords JSON: ") + e.what());
    }
}

inline ProblemInstance instance_from_csv_text(const std::string& text, std::string name = "") {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(detail::trim(cell)));
            } catch (const std::exception&) {
                throw FormatError("bad CSV cell: '" + cell + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw FormatError("empty CSV matrix");
    Matrix d(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size())
            throw FormatError("CSV matrix must be square");
        for (std::size_t j = 0; j < rows.size(); ++j) d(i, j) = rows[i][j];
    }
    return instance_from_matrix(std::move(d), std::move(name));
}

inline std::string instance_to_csv(const ProblemInstance& p) {
    std::string out;
    for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t j = 0; j < p.n; ++j) {
            if (j) out += ',';
            out += format_double(p.dist(i, j));
        }
        out += '\n';
    }
    return out;
}

/// TSPLIB subset: NODE_COORD_SECTION with EDGE_WEIGHT_TYPE EUC_2D only.
inline ProblemInstance instance_from_tsplib(const std::string& text, bool tsplib_rounding,
                                            std::string fallback_name = "") {
    std::istringstream in(text);
    std::string line;
    std::string name = fallback_name, edge_type;
    std::size_t dimension = 0;
    std::vector<std::array<double, 2>> coords;
    bool in_coords = false;

    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line == "EOF") break;
        if (in_coords) {
            std::istringstream ls(line);
            long idx;
            double x, y;
            if (!(ls >> idx >> x >> y)) throw FormatError("bad NODE_COORD_SECTION line: " + line);
            coords.push_back({x, y});
            continue;
        }
        if (line.rfind("NODE_COORD_SECTION", 0) == 0) {
            in_coords = true;
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = detail::trim(line.substr(0, colon));
        const std::string value = detail::trim(line.substr(colon + 1));
        if (key == "NAME") name = value;
        else if (key == "DIMENSION") dimension = static_cast<std::size_t>(std::stoul(value));
        else if (key == "EDGE_WEIGHT_TYPE") edge_type = value;
    }
    if (edge_type != "EUC_2D")
        throw FormatError("unsupported TSPLIB edge-weight type: '" + edge_type + "'");
    if (dimension != 0 && dimension != coords.size())
        throw FormatError("TSPLIB DIMENSION does not match coordinate count");
    return instance_from_coords(std::move(coords), tsplib_rounding, std::move(name));
}

/// Dispatch on extension: .json coordinates, .csv matrix, .tsp TSPLIB EUC_2D.
inline ProblemInstance load_instance(const std::filesystem::path& path,
                                     bool tsplib_rounding = false) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open instance file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const std::string stem = path.stem().string();
    const std::string ext = path.extension().string();
    if (ext == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("instance JSON: ") + e.what());
        }
        return instance_from_json(j, stem);
    }
    if (ext == ".csv") return instance_from_csv_text(text, stem);
    if (ext == ".tsp") return instance_from_tsplib(text, tsplib_rounding, stem);
    throw FormatError("unrecognized instance format: " + path.string());
}

} // namespace pir
