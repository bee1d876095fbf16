#pragma once

#include <span>

#include "ledgerlab/types.hpp"

namespace ledgerlab {

Digest sha256(std::span<const std::uint8_t> data);

}  // namespace ledgerlab
