#include <doctest.h>

#include <qecstab/circuit.hpp>
#include <qecstab/serialize.hpp>

using namespace qecstab;

namespace {

// Small well-formed program touching every instruction kind.
circuit_program sample_program() {
    circuit_program p;
    p.n_qubits = 4;
    p.coords = {point{q4::of(0), q4::of(0)}, point{q4::of(1), q4::of(0)},
                point{q4::halves(1), q4::quarters(3)}, point{q4::of(-1), q4::halves(-1)}};
    p.layers.push_back(make_layer({op1(op_kind::rz, 0), op1(op_kind::rz, 1),
                                   op1(op_kind::rz, 2), op1(op_kind::rz, 3)}));
    p.layers.push_back(make_layer({op1(op_kind::sqrt_x, 0), op1(op_kind::s, 1),
                                   op1(op_kind::sqrt_x_dag, 2), op1(op_kind::s_dag, 3)}));
    p.layers.push_back(make_layer({op2(op_kind::cz, 0, 1), op2(op_kind::cx, 2, 3)}));
    p.layers.push_back(make_layer({op2(op_kind::swap, 1, 2)}));
    {
        operation m0 = op1(op_kind::mz, 0);
        m0.record = 0;
        operation m1 = op1(op_kind::mz, 1);
        m1.record = 1;
        p.layers.push_back(make_layer({m0, m1}));
    }
    {
        operation xc = op1(op_kind::x_cond, 2);
        xc.record = 0;
        operation rz = op1(op_kind::rz, 0, 100);  // non-default duration
        p.layers.push_back(make_layer({xc, rz}));
    }
    p.detectors.push_back(detector{{0, 1}, q4::halves(1), q4::of(0), q4::of(1)});
    p.observables.push_back(observable{"demo", {1}});
    p.rounds = 1;
    p.round_duration_ns = total_duration_ns(p);
    p.round_spans = {{0, static_cast<uint32_t>(p.layers.size())}};
    return p;
}

}  // namespace

TEST_CASE("q4 printing and parsing") {
    CHECK(to_string(q4::of(3)) == "3");
    CHECK(to_string(q4::quarters(-2)) == "-0.5");
    CHECK(to_string(q4::quarters(7)) == "1.75");
    CHECK(to_string(q4::quarters(-7)) == "-1.75");
    for (int32_t v = -17; v <= 17; ++v) {
        q4 c = q4::quarters(v);
        CHECK(q4_parse(to_string(c)) == c);
    }
    CHECK(q4_parse("2.5") == q4::halves(5));
    CHECK_THROWS(q4_parse("1.3"));
    CHECK_THROWS(q4_parse("x"));
    CHECK(q4::quarters(-7).floor_units() == -2);
}

TEST_CASE("durations and record counts") {
    circuit_program empty;
    CHECK(total_duration_ns(empty) == 0);
    CHECK(record_count(empty) == 0);

    circuit_program p = sample_program();
    // 500 + 20 + 120 + 180 + 600 + 100
    CHECK(total_duration_ns(p) == 1520);
    CHECK(record_count(p) == 2);
    CHECK_FALSE(is_lowered(p));
}

TEST_CASE("layer duration is the max op duration") {
    layer l = make_layer({op1(op_kind::sqrt_x, 0), op2(op_kind::cz, 1, 2)});
    CHECK(l.duration_ns == 40);
}

TEST_CASE("structural validation accepts the sample and rejects corruptions") {
    circuit_program p = sample_program();
    CHECK(validate_structure(p).empty());

    SUBCASE("qubit used twice in a layer") {
        p.layers[1].ops.push_back(op1(op_kind::s, 0));
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("measurement records must be sequential") {
        p.layers[4].ops[1].record = 5;
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("condition must reference an earlier record") {
        p.layers[5].ops[0].record = 2;
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("detector records must exist") {
        p.detectors[0].records = {0, 9};
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("layer duration must match ops") {
        p.layers[2].duration_ns = 39;
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("round span must sum to the round duration") {
        p.round_duration_ns += 1;
        CHECK_FALSE(validate_structure(p).empty());
    }
    SUBCASE("duplicate coordinates rejected") {
        p.coords[1] = p.coords[0];
        CHECK_FALSE(validate_structure(p).empty());
    }
}

TEST_CASE("text serialization round-trips bit-exactly") {
    circuit_program p = sample_program();
    std::string text = to_text(p);
    circuit_program q = from_text(text);
    CHECK(q == p);
    CHECK(to_text(q) == text);

    SUBCASE("comments and blank lines are tolerated") {
        circuit_program r = from_text("# header\n\n" + text);
        CHECK(r == p);
    }
    SUBCASE("parse failures carry line numbers") {
        CHECK_THROWS_WITH_AS(from_text("QUBITS 1\nLAYER 20\nFROB 0\n"),
                             doctest::Contains("line 3"), std::runtime_error);
    }
    SUBCASE("operations before any layer are rejected") {
        CHECK_THROWS(from_text("QUBITS 1\nSQRT_X 0\n"));
    }
}
