// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/instance_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace gapforge;

namespace {

std::string field_of(std::string_view text) {
    try {
        parse_instance(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        return e.field();
    }
    ADD_FAILURE() << "parsed: " << text;
    return {};
}

}  // namespace

TEST(instance_io, round_trip_random) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const KlhInstance inst{random_instance(4, 2, 5, seed), 0.25, 0.7, 1.5};
        const auto back = parse_instance(dump_instance(InstanceFile::from(inst)));
        EXPECT_EQ(back.hamiltonian, inst.hamiltonian);
        EXPECT_EQ(back.a, inst.a);
        EXPECT_EQ(back.b, inst.b);
        EXPECT_EQ(back.c, inst.c);
        EXPECT_FALSE(back.meta.has_value());
    }
}

TEST(instance_io, round_trip_reduced_with_meta) {
    const KlhInstance inst{random_instance(3, 2, 3, 5), 1.0 / 3, 2.0 / 3, 2};
    const auto out = reduce_klh_to_gap(inst, ReductionVariant::HammingPenalty);
    const auto text = dump_instance(InstanceFile::from(out));
    const auto back = parse_instance(text);
    EXPECT_EQ(back.hamiltonian, out.instance.hamiltonian);
    ASSERT_TRUE(back.meta.has_value());
    EXPECT_EQ(back.meta->variant, ReductionVariant::HammingPenalty);
    EXPECT_EQ(back.meta->ancilla_index, 3);
    EXPECT_EQ(dump_instance(back), text);
}

TEST(instance_io, hand_written_projector) {
    const auto inst = parse_instance(R"({"n": 1, "a": 0.3, "b": 0.7,
        "terms": [{"qubits": [0], "re": [[0, 0], [0, 1]]}]})");
    EXPECT_EQ(inst.c, 1);
    const auto spec = eigenvalues(inst.hamiltonian);
    EXPECT_NEAR(spec.lambda(1), 0, 1e-12);
    EXPECT_NEAR(spec.lambda(2), 1, 1e-12);
}

TEST(instance_io, complex_entries) {
    const auto inst = parse_instance(R"({"n": 1, "a": 0.3, "b": 0.7,
        "terms": [{"qubits": [0], "re": [[0, 0], [0, 0]], "im": [[0, -1], [1, 0]]}]})");
    const auto spec = eigenvalues(inst.hamiltonian);
    EXPECT_NEAR(spec.lambda(1), -1, 1e-12);
    EXPECT_NE(dump_instance(inst).find("\"im\""), std::string::npos);
}

TEST(instance_io, parse_errors_name_the_field) {
    EXPECT_EQ(field_of(R"({"a": 0.3, "b": 0.7, "terms": []})"), "n");
    EXPECT_EQ(field_of(R"({"n": -1, "a": 0.3, "b": 0.7, "terms": []})"), "n");
    EXPECT_EQ(field_of(R"({"n": 1, "b": 0.7, "terms": []})"), "a");
    EXPECT_EQ(field_of(R"({"n": 1, "a": "x", "b": 0.7, "terms": []})"), "a");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "terms": []})"), "b");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "c": [], "terms": []})"), "c");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7})"), "terms");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"re": [[1]]}]})"), "terms[0].qubits");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"qubits": [0]}]})"), "terms[0].re");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"qubits": [0], "re": [[1, 2], [3, 4]]}]})"),
              "terms[0]");  // not Hermitian
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"qubits": [0], "re": [[1, 0], [0]]}]})"),
              "terms[0].re[1]");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"qubits": [0], "re": [[1]]}]})"), "terms[0]");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [{"qubits": [3], "re": [[1, 0], [0, 1]]}]})"),
              "terms");
    EXPECT_EQ(field_of(R"({"n": 1, "a": 0.3, "b": 0.7, "terms": [], "meta": {"variant": "x", "ancilla_index": 1}})"),
              "meta.variant");
    EXPECT_EQ(field_of("{"), "<document>");
    EXPECT_EQ(field_of("[]"), "<document>");
}

TEST(instance_io, files) {
    const auto dir = std::filesystem::temp_directory_path() / "gapforge_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "inst.json";
    const KlhInstance inst{random_instance(2, 1, 2, 3), 1.0 / 3, 2.0 / 3, 1};
    write_instance(InstanceFile::from(inst), path);
    EXPECT_EQ(read_klh_instance(path).hamiltonian, inst.hamiltonian);
    try {
        read_instance(dir / "missing.json");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
    EXPECT_THROW(write_instance(InstanceFile::from(inst), dir / "no" / "such" / "dir.json"), Error);
    std::filesystem::remove_all(dir);
}
