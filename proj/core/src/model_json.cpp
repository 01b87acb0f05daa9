#include "lcm/model_json.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lcm/errors.hpp"

namespace lcmid {

using nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& why) {
    throw AnalysisError(ErrorKind::invalid_model, "model file: " + why);
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) reject(where + " must be an integer");
    return v.get<int>();
}

std::vector<int> int_array(const json& j, const char* key) {
    if (!j.contains(key)) reject(std::string("missing key \"") + key + "\"");
    const auto& arr = j.at(key);
    if (!arr.is_array()) reject(std::string("\"") + key + "\" must be an array");
    std::vector<int> out;
    for (const auto& v : arr) out.push_back(as_int(v, key));
    return out;
}

} // namespace

Model model_from_json(const json& j) {
    static const std::set<std::string> known = {"n", "edges", "in", "out", "leak", "meta"};
    if (!j.is_object()) reject("top level must be an object");
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) reject("unknown key \"" + key + "\"");
    }
    if (j.contains("meta") && !j.at("meta").is_object()) reject("\"meta\" must be an object");
    if (!j.contains("n")) reject("missing key \"n\"");
    const int n = as_int(j.at("n"), "n");

    if (!j.contains("edges") || !j.at("edges").is_array()) reject("\"edges\" must be an array");
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2) reject("each edge must be a [from, to] pair");
        edges.push_back({as_int(e[0], "edge"), as_int(e[1], "edge")});
    }
    return Model(n, std::move(edges), int_array(j, "in"), int_array(j, "out"), int_array(j, "leak"));
}

json model_to_json(const Model& m) {
    json edges = json::array();
    for (const auto& e : m.edges()) edges.push_back({e.from, e.to});
    return json{{"n", m.size()}, {"edges", edges}, {"in", m.inputs()}, {"out", m.outputs()}, {"leak", m.leaks()}};
}

Model parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        reject(std::string("not valid JSON: ") + e.what());
    }
    return model_from_json(j);
}

Model read_model(std::istream& in) {
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

Model load_model(const std::string& path) {
    if (path == "-") return read_model(std::cin);
    std::ifstream in(path);
    if (!in) reject("cannot open " + path);
    return read_model(in);
}

std::string encode(const Model& m) {
    return model_to_json(m).dump();
}

} // namespace lcmid
