#pragma once

namespace starkhhg {

// Selects the serial reference loop or the OpenMP kernel. Both produce
// bit-identical results; the serial path is kept for testing.
enum class Execution { serial, parallel };

}  // namespace starkhhg
