// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#include "gapforge/instance_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace gapforge {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::ParseError, "field \"" + field + "\": " + why, field);
}

const json& require(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(path, "missing");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) parse_fail(path, "expected a number");
    return j.get<double>();
}

ComplexMatrix<double> real_matrix(const json& j, const std::string& path) {
    if (!j.is_array()) parse_fail(path, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(rows, rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
            parse_fail(row_path, "expected a row of " + std::to_string(rows) + " numbers");
        }
        for (Eigen::Index c = 0; c < rows; ++c) {
            m(r, c) = number(row[static_cast<std::size_t>(c)], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m.cast<std::complex<double>>();
}

json matrix_rows(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

LocalTerm parse_term(const json& j, const std::string& path) {
    if (!j.is_object()) parse_fail(path, "expected an object");
    const auto& qubits_json = require(j, "qubits", path + ".qubits");
    if (!qubits_json.is_array()) parse_fail(path + ".qubits", "expected an array of integers");
    std::vector<int> qubits;
    for (std::size_t i = 0; i < qubits_json.size(); ++i) {
        if (!qubits_json[i].is_number_integer()) parse_fail(path + ".qubits", "expected an array of integers");
        qubits.push_back(qubits_json[i].get<int>());
    }
    ComplexMatrix<double> m = real_matrix(require(j, "re", path + ".re"), path + ".re");
    if (const auto it = j.find("im"); it != j.end()) {
        const ComplexMatrix<double> im = real_matrix(*it, path + ".im");
        if (im.rows() != m.rows()) parse_fail(path + ".im", "shape differs from \"re\"");
        m += std::complex<double>(0, 1) * im;
    }
    try {
        return LocalTerm::make(std::move(qubits), std::move(m));
    } catch (const Error& e) {
        parse_fail(path, e.what());
    }
}

}  // namespace

InstanceFile parse_instance(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail("<document>", e.what());
    }
    if (!root.is_object()) parse_fail("<document>", "expected a JSON object");

    InstanceFile out;
    const auto& n_json = require(root, "n", "n");
    if (!n_json.is_number_integer() || n_json.get<long long>() < 0 || n_json.get<long long>() > 62) {
        parse_fail("n", "expected a qubit count between 0 and 62");
    }
    const int n = n_json.get<int>();
    out.a = number(require(root, "a", "a"), "a");
    out.b = number(require(root, "b", "b"), "b");
    if (const auto it = root.find("c"); it != root.end()) out.c = number(*it, "c");

    const auto& terms_json = require(root, "terms", "terms");
    if (!terms_json.is_array()) parse_fail("terms", "expected an array");
    std::vector<LocalTerm> terms;
    for (std::size_t t = 0; t < terms_json.size(); ++t) {
        terms.push_back(parse_term(terms_json[t], "terms[" + std::to_string(t) + "]"));
    }
    try {
        out.hamiltonian = assemble(n, std::move(terms));
    } catch (const Error& e) {
        parse_fail("terms", e.what());
    }

    if (const auto it = root.find("meta"); it != root.end()) {
        if (!it->is_object()) parse_fail("meta", "expected an object");
        InstanceMeta meta;
        const auto& v = require(*it, "variant", "meta.variant");
        const auto variant = v.is_string() ? parse_variant(v.get<std::string>()) : std::nullopt;
        if (!variant) parse_fail("meta.variant", "expected \"global\" or \"hamming\"");
        meta.variant = *variant;
        const auto& anc = require(*it, "ancilla_index", "meta.ancilla_index");
        if (!anc.is_number_integer()) parse_fail("meta.ancilla_index", "expected an integer");
        meta.ancilla_index = anc.get<int>();
        out.meta = meta;
    }
    return out;
}

std::string dump_instance(const InstanceFile& inst) {
    json root;
    root["n"] = inst.hamiltonian.num_qubits();
    root["c"] = inst.c;
    root["a"] = inst.a;
    root["b"] = inst.b;
    json terms = json::array();
    for (const auto& term : inst.hamiltonian.terms()) {
        json t;
        t["qubits"] = term.support();
        t["re"] = matrix_rows(term.matrix().real());
        if (!term.matrix().imag().isZero(0)) t["im"] = matrix_rows(term.matrix().imag());
        terms.push_back(std::move(t));
    }
    root["terms"] = std::move(terms);
    if (inst.meta) {
        root["meta"] = {{"variant", std::string(to_string(inst.meta->variant))},
                        {"ancilla_index", inst.meta->ancilla_index}};
    }
    return root.dump(1) + "\n";
}

InstanceFile read_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IoError, "failed reading " + path.string());
    return parse_instance(buffer.str());
}

void write_instance(const InstanceFile& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << dump_instance(inst);
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace gapforge
