#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "entspec/complex_matrix.hpp"
#include "entspec/errors.hpp"
#include "entspec/states.hpp"

namespace entspec {

using Json = nlohmann::ordered_json;

// A state file is a JSON object with integer fields dim_a and dim_b and a
// row-major "matrix" of [re, im] pairs. A "generator" object may tag how the
// state was produced; it is carried through untouched.
struct StateDocument {
    BipartiteState state;
    Json generator;  // null when the file carries no provenance
};

namespace detail {

inline std::size_t parse_dim_field(const Json& doc, const char* key) {
    if (!doc.contains(key)) throw Error(errc::parse_error, std::string(key) + ": missing field");
    const Json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1)
        throw Error(errc::parse_error, std::string(key) + ": expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

inline Complex parse_entry(const Json& cell, std::size_t i, std::size_t j) {
    const std::string where = "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() || !cell[1].is_number())
        throw Error(errc::parse_error, where + ": expected a [re, im] pair of numbers");
    return {cell[0].get<double>(), cell[1].get<double>()};
}

}  // namespace detail

inline StateDocument parse_state_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::parse_error, e.what());
    }
    if (!doc.is_object()) throw Error(errc::parse_error, "top-level value must be an object");

    const std::size_t dim_a = detail::parse_dim_field(doc, "dim_a");
    const std::size_t dim_b = detail::parse_dim_field(doc, "dim_b");
    const std::size_t d = dim_a * dim_b;

    if (!doc.contains("matrix") || !doc.at("matrix").is_array())
        throw Error(errc::parse_error, "matrix: missing or not an array");
    const Json& rows = doc.at("matrix");
    if (rows.size() != d)
        throw Error(errc::parse_error, "matrix: has " + std::to_string(rows.size()) +
                                           " rows, dims require " + std::to_string(d));
    ComplexMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        const Json& row = rows[i];
        if (!row.is_array() || row.size() != d)
            throw Error(errc::parse_error, "matrix[" + std::to_string(i) + "]: expected " +
                                               std::to_string(d) + " entries");
        for (std::size_t j = 0; j < d; ++j) m(i, j) = detail::parse_entry(row[j], i, j);
    }

    Json generator;
    if (doc.contains("generator")) generator = doc.at("generator");
    return {BipartiteState(dim_a, dim_b, std::move(m)), std::move(generator)};
}

inline Json state_to_json(const BipartiteState& s, const Json& generator = Json()) {
    Json doc;
    doc["dim_a"] = s.dim_a();
    doc["dim_b"] = s.dim_b();
    Json rows = Json::array();
    for (std::size_t i = 0; i < s.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < s.dim(); ++j)
            row.push_back(Json::array({s.rho()(i, j).real(), s.rho()(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    doc["matrix"] = std::move(rows);
    if (!generator.is_null()) doc["generator"] = generator;
    return doc;
}

inline std::string serialize_state_file(const BipartiteState& s, const Json& generator = Json()) {
    return state_to_json(s, generator).dump(2) + "\n";
}

inline StateDocument load_state_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(errc::parse_error, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_state_json(buf.str());
}

inline void save_state_file(const std::string& path, const BipartiteState& s,
                            const Json& generator = Json()) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(errc::parse_error, "cannot write " + path);
    out << serialize_state_file(s, generator);
}

}  // namespace entspec
