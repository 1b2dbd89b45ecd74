// problem_file.hpp
// Problem file: a JSON document
//   { "matrix": [[[re, im], [re, im], [re, im]], ...3 rows...],
//     "b":      [[re, im], [re, im], [re, im]] }

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"
#include "qutrit_sle/spectral.hpp"

namespace qutrit_sle {

inline constexpr std::size_t problem_dimension = 3;
inline constexpr double problem_hermitian_tolerance = 1e-8;

class problem_file_error : public invalid_input {
public:
    using invalid_input::invalid_input;
};

namespace detail {

inline complex parse_complex(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw problem_file_error("field " + field + ": expected [re, im], got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline const nlohmann::json& require_array(const nlohmann::json& doc, const char* key,
                                           std::size_t size) {
    if (!doc.contains(key)) throw problem_file_error(std::string("missing field ") + key);
    const auto& v = doc.at(key);
    if (!v.is_array() || v.size() != size) {
        throw problem_file_error(std::string("field ") + key + ": expected an array of " +
                                 std::to_string(size) + " entries");
    }
    return v;
}

}  // namespace detail

inline SLEProblem parse_problem(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw problem_file_error(e.what());
    }
    if (!doc.is_object()) throw problem_file_error("top level must be an object");

    const std::size_t n = problem_dimension;
    const auto& rows = detail::require_array(doc, "matrix", n);
    cmatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::string row_field = "matrix[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != n) {
            throw problem_file_error("field " + row_field + ": expected " + std::to_string(n) +
                                     " entries");
        }
        for (std::size_t c = 0; c < n; ++c)
            m(r, c) = detail::parse_complex(rows[r][c], row_field + "[" + std::to_string(c) + "]");
    }

    const auto& bj = detail::require_array(doc, "b", n);
    cvector b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = detail::parse_complex(bj[i], "b[" + std::to_string(i) + "]");

    const double defect = hermiticity_defect(m);
    if (!(defect < problem_hermitian_tolerance)) {
        throw problem_file_error("field matrix: not Hermitian within 1e-8 (||M - M^H||_max = " +
                                 std::to_string(defect) + ")");
    }
    if (!(norm2(b) > 0.0)) throw problem_file_error("field b: must be nonzero");

    // within tolerance: take the Hermitian part so downstream checks are exact
    cmatrix sym = complex{0.5} * (m + m.adjoint());
    return SLEProblem(HermitianMatrix(std::move(sym)), std::move(b));
}

inline SLEProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw problem_file_error("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_problem(ss.str());
    } catch (const problem_file_error& e) {
        throw problem_file_error(path + ": " + e.what());
    }
}

inline std::string format_problem(const SLEProblem& p) {
    nlohmann::json doc;
    auto pair = [](complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
    doc["matrix"] = nlohmann::json::array();
    for (std::size_t r = 0; r < p.a().dim(); ++r) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < p.a().dim(); ++c) row.push_back(pair(p.a()(r, c)));
        doc["matrix"].push_back(row);
    }
    doc["b"] = nlohmann::json::array();
    for (const auto& z : p.b()) doc["b"].push_back(pair(z));
    return doc.dump(2) + "\n";
}

}  // namespace qutrit_sle
