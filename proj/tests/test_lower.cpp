#include <doctest.h>

#include <qecstab/builders.hpp>
#include <qecstab/validate.hpp>

using namespace qecstab;

namespace {

operation mz_op(int32_t q, int32_t rec) {
    operation op = op1(op_kind::mz, q);
    op.record = rec;
    return op;
}

// Scrambles the inputs so gate-identity bugs can't hide behind |0...0>.
void add_prelude(circuit_program& p) {
    p.layers.push_back(make_layer({op1(op_kind::sqrt_x, 0), op1(op_kind::s, 1)}));
    p.layers.push_back(make_layer({op2(op_kind::cz, 0, 1), op2(op_kind::cz, 2, 3)}));
    p.layers.push_back(make_layer({op1(op_kind::s_dag, 2), op1(op_kind::sqrt_x_dag, 3)}));
}

void add_readout(circuit_program& p) {
    p.layers.push_back(
        make_layer({mz_op(0, 0), mz_op(1, 1), mz_op(2, 2), mz_op(3, 3)}));
}

}  // namespace

TEST_CASE("controlled-flip layers lower to an equivalent native sandwich") {
    circuit_program p;
    p.n_qubits = 4;
    add_prelude(p);
    p.layers.push_back(make_layer({op2(op_kind::cx, 0, 1), op2(op_kind::cx, 3, 2)}));
    add_readout(p);

    circuit_program low = lower(p);
    CHECK(is_lowered(low));
    CHECK(validate_structure(low).empty());
    CHECK(total_duration_ns(low) == total_duration_ns(p));
    CHECK(low.layers.size() == p.layers.size() + 4);
    CHECK(tableau_equivalent(p, low));
}

TEST_CASE("swap layers lower to three entangling blocks") {
    circuit_program p;
    p.n_qubits = 4;
    add_prelude(p);
    p.layers.push_back(make_layer({op2(op_kind::swap, 1, 2)}));
    add_readout(p);

    circuit_program low = lower(p);
    CHECK(is_lowered(low));
    CHECK(validate_structure(low).empty());
    CHECK(total_duration_ns(low) == total_duration_ns(p));
    CHECK(low.layers.size() == p.layers.size() + 5);
    CHECK(tableau_equivalent(p, low));
}

TEST_CASE("round spans survive lowering") {
    circuit_program p;
    p.n_qubits = 2;
    p.layers.push_back(make_layer({op1(op_kind::rz, 0), op1(op_kind::rz, 1)}));
    for (int j = 0; j < 2; ++j) {
        p.layers.push_back(make_layer({op2(op_kind::swap, 0, 1)}));
        p.layers.push_back(make_layer({mz_op(0, 2 * j), mz_op(1, 2 * j + 1)}));
    }
    p.rounds = 2;
    p.round_duration_ns = 180 + 600;
    p.round_spans = {{1, 3}, {3, 5}};
    REQUIRE(validate_structure(p).empty());

    circuit_program low = lower(p);
    CHECK(validate_structure(low).empty());
    CHECK(low.round_spans == std::vector<std::pair<uint32_t, uint32_t>>{{1, 8}, {8, 15}});
    CHECK(tableau_equivalent(p, low));
}

TEST_CASE("mixed non-native layers are rejected") {
    circuit_program p;
    p.n_qubits = 4;
    p.layers.push_back(make_layer({op2(op_kind::cx, 0, 1), op2(op_kind::swap, 2, 3)}));
    CHECK_THROWS_AS(lower(p), std::invalid_argument);
}
