#include "embalign/errors.hpp"

namespace embalign {

DegenerateRowError::DegenerateRowError(std::size_t row)
    : Error("row " + std::to_string(row) + " has zero norm"), row_(row) {}

}  // namespace embalign
