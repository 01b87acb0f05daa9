#include "lcm/model.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "lcm/errors.hpp"

namespace lcmid {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::invalid_model: return "invalid-model";
    case ErrorKind::not_strongly_connected: return "not-strongly-connected";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::missing_target: return "missing-target";
    case ErrorKind::duplicate_target: return "duplicate-target";
    case ErrorKind::no_path: return "no-path";
    case ErrorKind::model_unidentifiable: return "model-unidentifiable";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    }
    return "unknown";
}

namespace {

std::vector<int> normalized(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

bool in_range(const Model& m, int c) { return c >= 1 && c <= m.size(); }

} // namespace

Model::Model(int n, std::vector<Edge> edges, std::vector<int> inputs, std::vector<int> outputs,
             std::vector<int> leaks)
    : n_(n), edges_(std::move(edges)), inputs_(normalized(std::move(inputs))),
      outputs_(normalized(std::move(outputs))), leaks_(normalized(std::move(leaks))) {
    std::sort(edges_.begin(), edges_.end());
}

bool Model::has_edge(const Edge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool Model::has_leak(int compartment) const {
    return std::binary_search(leaks_.begin(), leaks_.end(), compartment);
}

std::vector<Parameter> Model::parameters() const {
    std::vector<Parameter> params;
    params.reserve(parameter_count());
    for (const auto& e : edges_) params.push_back(e.parameter());
    for (int l : leaks_) params.push_back(Parameter::leak(l));
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    return params;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::nonpositive_size: return "nonpositive-size";
    case ViolationKind::missing_output: return "missing-output";
    case ViolationKind::self_loop: return "self-loop";
    case ViolationKind::duplicate_edge: return "duplicate-edge";
    case ViolationKind::edge_out_of_range: return "edge-out-of-range";
    case ViolationKind::input_out_of_range: return "input-out-of-range";
    case ViolationKind::output_out_of_range: return "output-out-of-range";
    case ViolationKind::leak_out_of_range: return "leak-out-of-range";
    }
    return "unknown";
}

std::vector<Violation> validate(const Model& m) {
    std::vector<Violation> out;
    auto edge_str = [](const Edge& e) {
        return std::to_string(e.from) + "->" + std::to_string(e.to);
    };
    if (m.size() <= 0) {
        out.push_back({ViolationKind::nonpositive_size, "n = " + std::to_string(m.size())});
    }
    if (m.outputs().empty()) {
        out.push_back({ViolationKind::missing_output, "at least one output is required"});
    }
    const auto& edges = m.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.from == e.to) out.push_back({ViolationKind::self_loop, edge_str(e)});
        if (!in_range(m, e.from) || !in_range(m, e.to)) {
            out.push_back({ViolationKind::edge_out_of_range, edge_str(e)});
        }
        if (i > 0 && edges[i - 1] == e) out.push_back({ViolationKind::duplicate_edge, edge_str(e)});
    }
    auto check_set = [&](const std::vector<int>& set, ViolationKind kind) {
        for (int c : set) {
            if (!in_range(m, c)) out.push_back({kind, "compartment " + std::to_string(c)});
        }
    };
    check_set(m.inputs(), ViolationKind::input_out_of_range);
    check_set(m.outputs(), ViolationKind::output_out_of_range);
    check_set(m.leaks(), ViolationKind::leak_out_of_range);
    return out;
}

void require_valid(const Model& m) {
    auto violations = validate(m);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid model:";
    for (const auto& v : violations) os << ' ' << to_string(v.kind) << " (" << v.detail << ")";
    throw AnalysisError(ErrorKind::invalid_model, os.str());
}

namespace {

std::vector<std::vector<int>> adjacency(const Model& m, bool reversed) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m.size()) + 1);
    for (const auto& e : m.edges()) {
        if (reversed) {
            adj[static_cast<std::size_t>(e.to)].push_back(e.from);
        } else {
            adj[static_cast<std::size_t>(e.from)].push_back(e.to);
        }
    }
    return adj;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source) {
    std::vector<int> dist(adj.size(), -1);
    std::deque<int> queue{source};
    dist[static_cast<std::size_t>(source)] = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] < 0) {
                dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

} // namespace

bool is_strongly_connected(const Model& m) {
    require_valid(m);
    // Strongly connected iff vertex 1 reaches everything in G and in G reversed.
    for (bool reversed : {false, true}) {
        auto dist = bfs_distances(adjacency(m, reversed), 1);
        for (int v = 1; v <= m.size(); ++v) {
            if (dist[static_cast<std::size_t>(v)] < 0) return false;
        }
    }
    return true;
}

int shortest_io_path_length(const Model& m) {
    require_valid(m);
    if (!m.single_input_output()) {
        throw AnalysisError(ErrorKind::unsupported,
                            "shortest input-output path needs exactly one input and one output");
    }
    auto dist = bfs_distances(adjacency(m, false), m.inputs().front());
    int d = dist[static_cast<std::size_t>(m.outputs().front())];
    if (d < 0) throw AnalysisError(ErrorKind::no_path, "output is unreachable from the input");
    return d;
}

Mutation Mutation::inverse() const {
    switch (action) {
    case Action::add_edge: return remove_edge(edge.from, edge.to);
    case Action::remove_edge: return add_edge(edge.from, edge.to);
    case Action::add_leak: return remove_leak(compartment);
    case Action::remove_leak: return add_leak(compartment);
    }
    return *this;
}

Parameter Mutation::parameter() const {
    if (action == Action::add_leak || action == Action::remove_leak) {
        return Parameter::leak(compartment);
    }
    return edge.parameter();
}

std::string Mutation::describe() const {
    switch (action) {
    case Action::add_edge: return "add-edge " + std::to_string(edge.from) + "," + std::to_string(edge.to);
    case Action::remove_edge:
        return "remove-edge " + std::to_string(edge.from) + "," + std::to_string(edge.to);
    case Action::add_leak: return "add-leak " + std::to_string(compartment);
    case Action::remove_leak: return "remove-leak " + std::to_string(compartment);
    }
    return "?";
}

Model apply(const Model& m, const Mutation& mut) {
    auto edges = m.edges();
    auto leaks = m.leaks();
    switch (mut.action) {
    case Mutation::Action::add_edge:
        if (m.has_edge(mut.edge)) {
            throw AnalysisError(ErrorKind::duplicate_target, "edge already present: " + mut.describe());
        }
        if (mut.edge.from == mut.edge.to || !in_range(m, mut.edge.from) || !in_range(m, mut.edge.to)) {
            throw AnalysisError(ErrorKind::precondition, "edge not admissible: " + mut.describe());
        }
        edges.push_back(mut.edge);
        break;
    case Mutation::Action::remove_edge: {
        auto it = std::find(edges.begin(), edges.end(), mut.edge);
        if (it == edges.end()) {
            throw AnalysisError(ErrorKind::missing_target, "no such edge: " + mut.describe());
        }
        edges.erase(it);
        break;
    }
    case Mutation::Action::add_leak:
        if (m.has_leak(mut.compartment)) {
            throw AnalysisError(ErrorKind::duplicate_target, "leak already present: " + mut.describe());
        }
        if (!in_range(m, mut.compartment)) {
            throw AnalysisError(ErrorKind::precondition, "compartment out of range: " + mut.describe());
        }
        leaks.push_back(mut.compartment);
        break;
    case Mutation::Action::remove_leak: {
        auto it = std::find(leaks.begin(), leaks.end(), mut.compartment);
        if (it == leaks.end()) {
            throw AnalysisError(ErrorKind::missing_target, "no such leak: " + mut.describe());
        }
        leaks.erase(it);
        break;
    }
    }
    return Model(m.size(), std::move(edges), m.inputs(), m.outputs(), std::move(leaks));
}

std::vector<Mutation> applicable_mutations(const Model& m, Mutation::Action action) {
    std::vector<Mutation> out;
    switch (action) {
    case Mutation::Action::add_edge:
        for (int from = 1; from <= m.size(); ++from) {
            for (int to = 1; to <= m.size(); ++to) {
                if (from != to && !m.has_edge({from, to})) out.push_back(Mutation::add_edge(from, to));
            }
        }
        break;
    case Mutation::Action::remove_edge:
        for (const auto& e : m.edges()) out.push_back(Mutation::remove_edge(e.from, e.to));
        break;
    case Mutation::Action::add_leak:
        for (int c = 1; c <= m.size(); ++c) {
            if (!m.has_leak(c)) out.push_back(Mutation::add_leak(c));
        }
        break;
    case Mutation::Action::remove_leak:
        for (int c : m.leaks()) out.push_back(Mutation::remove_leak(c));
        break;
    }
    return out;
}

} // namespace lcmid
