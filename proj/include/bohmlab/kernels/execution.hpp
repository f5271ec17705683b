#pragma once

namespace bohmlab {

// Serial runs the reference loops; Parallel runs the OpenMP kernels. Both produce identical bits.
enum class Execution { Serial, Parallel };

}  // namespace bohmlab
