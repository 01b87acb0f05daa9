#pragma once

#include <compare>
#include <string>
#include <vector>

#include "lcm/parameter.hpp"

namespace lcmid {

/// Directed edge from -> to between 1-indexed compartments.
struct Edge {
    int from = 0;
    int to = 0;

    Parameter parameter() const { return Parameter::edge(from, to); }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// A linear compartmental model (G, In, Out, Leak) on compartments 1..n.
///
/// Construction does not validate: a model read from a file may violate the
/// invariants and `validate` reports what is wrong. Edges are kept sorted by
/// (from, to); compartment sets are kept sorted and duplicate-free.
class Model {
public:
    Model() = default;
    Model(int n, std::vector<Edge> edges, std::vector<int> inputs, std::vector<int> outputs,
          std::vector<int> leaks);

    int size() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& inputs() const { return inputs_; }
    const std::vector<int>& outputs() const { return outputs_; }
    const std::vector<int>& leaks() const { return leaks_; }

    bool has_edge(const Edge& e) const;
    bool has_leak(int compartment) const;

    /// Edge parameters ordered by (i, j) followed by leak parameters.
    std::vector<Parameter> parameters() const;
    std::size_t parameter_count() const { return edges_.size() + leaks_.size(); }
    VarTable var_table() const { return VarTable(parameters()); }

    bool single_input_output() const { return inputs_.size() == 1 && outputs_.size() == 1; }

    friend bool operator==(const Model&, const Model&) = default;

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> inputs_;
    std::vector<int> outputs_;
    std::vector<int> leaks_;
};

enum class ViolationKind {
    nonpositive_size,
    missing_output,
    self_loop,
    duplicate_edge,
    edge_out_of_range,
    input_out_of_range,
    output_out_of_range,
    leak_out_of_range,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
};

std::vector<Violation> validate(const Model& m);

/// Throws AnalysisError(invalid_model) listing every violation.
void require_valid(const Model& m);

bool is_strongly_connected(const Model& m);

/// Breadth-first distance in edges from the unique input to the unique output.
int shortest_io_path_length(const Model& m);

struct Mutation {
    enum class Action { add_edge, remove_edge, add_leak, remove_leak };

    Action action = Action::add_edge;
    Edge edge{};          // edge actions
    int compartment = 0;  // leak actions

    static Mutation add_edge(int from, int to) { return {Action::add_edge, {from, to}, 0}; }
    static Mutation remove_edge(int from, int to) { return {Action::remove_edge, {from, to}, 0}; }
    static Mutation add_leak(int c) { return {Action::add_leak, {}, c}; }
    static Mutation remove_leak(int c) { return {Action::remove_leak, {}, c}; }

    bool is_addition() const { return action == Action::add_edge || action == Action::add_leak; }
    Mutation inverse() const;
    /// The parameter created or destroyed by this mutation.
    Parameter parameter() const;
    std::string describe() const;

    friend bool operator==(const Mutation&, const Mutation&) = default;
};

/// Returns the mutated model; `m` is untouched.
Model apply(const Model& m, const Mutation& mut);

/// All mutations applicable to `m` of the given action.
std::vector<Mutation> applicable_mutations(const Model& m, Mutation::Action action);

} // namespace lcmid
