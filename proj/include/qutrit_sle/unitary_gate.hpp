// unitary_gate.hpp

#pragma once

#include <utility>

#include "qutrit_sle/dense.hpp"
#include "qutrit_sle/errors.hpp"

namespace qutrit_sle {

/// Dense unitary. Construction fails unless ||U U^H - I||_max < tolerance.
class UnitaryGate {
public:
    static constexpr double default_tolerance = 1e-10;

    explicit UnitaryGate(cmatrix entries, double tolerance = default_tolerance)
        : entries_(std::move(entries)) {
        if (entries_.dim() == 0) throw invalid_input("UnitaryGate: empty matrix");
        const double defect = unitarity_defect(entries_);
        if (!(defect < tolerance)) throw not_unitary(defect);
    }

    static UnitaryGate identity(std::size_t dim) { return UnitaryGate(cmatrix::identity(dim)); }

    std::size_t dim() const { return entries_.dim(); }
    const cmatrix& matrix() const { return entries_; }
    complex operator()(std::size_t row, std::size_t col) const { return entries_(row, col); }

    friend UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b) {
        return UnitaryGate(a.entries_ * b.entries_);
    }

private:
    cmatrix entries_;
};

inline UnitaryGate adjoint(const UnitaryGate& u) { return UnitaryGate(u.matrix().adjoint()); }

}  // namespace qutrit_sle
