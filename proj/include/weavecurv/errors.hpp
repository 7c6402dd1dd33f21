#pragma once

#include <stdexcept>
#include <string>

namespace weavecurv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

struct BackendMismatch : Error {
    BackendMismatch() : Error("operands belong to different variable contexts or backends") {}
    explicit BackendMismatch(const std::string& what) : Error(what) {}
};

struct JetOrderExhausted : Error {
    JetOrderExhausted() : Error("jet order budget exhausted") {}
};

struct SingularPoint : Error {
    explicit SingularPoint(const std::string& what) : Error(what) {}
};

struct ZeroDenominator : Error {
    ZeroDenominator() : Error("division by the identically zero function") {}
};

struct SyntaxError : Error {
    std::size_t offset;
    SyntaxError(const std::string& what, std::size_t off)
        : Error(what + " (at offset " + std::to_string(off) + ")"), offset(off) {}
};

struct UnknownIdentifier : Error {
    std::string name;
    explicit UnknownIdentifier(const std::string& ident)
        : Error("unknown identifier '" + ident + "'"), name(ident) {}
};

struct DegenerateField : Error {
    explicit DegenerateField(const std::string& what) : Error(what) {}
};

struct BadSubset : Error {
    explicit BadSubset(const std::string& what) : Error(what) {}
};

struct OrderOverflow : Error {
    OrderOverflow() : Error("multi-index order exceeds table maximum") {}
};

struct SingularMatrix : Error {
    SingularMatrix() : Error("matrix is singular over the scalar field") {}
    explicit SingularMatrix(const std::string& what) : Error(what) {}
};

struct BadPivots : Error {
    explicit BadPivots(const std::string& what) : Error(what) {}
};

struct RankDeficient : Error {
    explicit RankDeficient(const std::string& what) : Error(what) {}
};

struct InconsistentSystem : Error {
    std::size_t row;
    explicit InconsistentSystem(std::size_t r)
        : Error("linear system inconsistent at equation row " + std::to_string(r)), row(r) {}
};

struct InconsistentProlongation : Error {
    int equation_u;
    int equation_t;
    InconsistentProlongation(int u, int t)
        : Error("prolonged system inconsistent at equation (u=" + std::to_string(u) +
                ", t=" + std::to_string(t) + ")"),
          equation_u(u), equation_t(t) {}
};

} // namespace weavecurv
