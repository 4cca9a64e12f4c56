#pragma once

namespace ebsched {

/// Worker cap for the OpenMP kernels. Initialised from EBSCHED_THREADS when
/// set, otherwise the OpenMP default.
int worker_count();
void set_worker_count(int n);

}  // namespace ebsched
