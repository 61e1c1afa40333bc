#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcl/qla.hpp"

namespace qcl::gates {

Matrix I();
Matrix X();
Matrix Y();
Matrix Z();
Matrix H();
Matrix S();
Matrix T();
// Control is the high-order qubit.
Matrix CX();
Matrix CZ();
Matrix SWAP();
// Controls are the two high-order qubits.
Matrix Toffoli();
Matrix CCZ();

// Case-insensitive lookup; also accepts CNOT, CCX, TOFF.
Matrix named(std::string_view name);
std::vector<std::string> names();

// Places `gate` on the ordered targets of an n-qubit register.
DenseOperator embed(const Matrix& gate, std::span<const int> targets, int n);

}  // namespace qcl::gates
