// errors.hpp
// Exception types raised by the library. The CLI maps each family onto a
// stable exit code, so keep the hierarchy flat.

#pragma once

#include <stdexcept>
#include <string>

namespace qutrit_sle {

/// Contract violation on input data (bad digits, mismatched layouts, etc).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class not_hermitian : public invalid_input {
public:
    explicit not_hermitian(double defect)
        : invalid_input("matrix is not Hermitian (||M - M^H||_max = " + std::to_string(defect) + ")"),
          defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_;
};

class not_unitary : public invalid_input {
public:
    explicit not_unitary(double defect)
        : invalid_input("gate is not unitary (||U U^H - I||_max = " + std::to_string(defect) + ")"),
          defect_(defect) {}
    double defect() const { return defect_; }

private:
    double defect_;
};

class singular_matrix : public std::runtime_error {
public:
    explicit singular_matrix(double min_abs_eigenvalue)
        : std::runtime_error("matrix is singular (min |eigenvalue| = " +
                             std::to_string(min_abs_eigenvalue) + ")"),
          min_abs_eigenvalue_(min_abs_eigenvalue) {}
    double min_abs_eigenvalue() const { return min_abs_eigenvalue_; }

private:
    double min_abs_eigenvalue_;
};

class no_convergence : public std::runtime_error {
public:
    explicit no_convergence(double residual)
        : std::runtime_error("eigensolver did not converge (off-diagonal norm " +
                             std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

class postselection_impossible : public std::runtime_error {
public:
    explicit postselection_impossible(double probability)
        : std::runtime_error("post-selection impossible (probability " +
                             std::to_string(probability) + ")"),
          probability_(probability) {}
    double probability() const { return probability_; }

private:
    double probability_;
};

/// Spectrum is unusable by the circuit: eigenvalues outside (0,1) or C too large.
class inadmissible_spectrum : public invalid_input {
public:
    using invalid_input::invalid_input;
};

/// No single ternary digit position separates all eigenvalues, or (in the
/// pipeline) two eigenvalues land on the same clock digit.
class digit_collision : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qutrit_sle
