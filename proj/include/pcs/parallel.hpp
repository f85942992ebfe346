#pragma once

namespace pcs {

// Execution policy for the batch kernels. Serial paths are the reference;
// parallel paths must reproduce them bit for bit.
enum class Exec { serial, parallel };

// Threads OpenMP would use for a parallel region (1 when built without it).
int max_threads();

}  // namespace pcs
