#pragma once

#include "rme/step.hpp"

namespace rme {

enum class WaitResult : uint8_t { Progress, Returned, Blocked };

// One sub-line of signal() on the object whose Bit cell is `obj`.
// `sub` starts at Set1; returns true when the call has completed.
bool signal_dsm_step(StepCtx& c, CellId obj, Sub& sub, SigRegs& r);

// One sub-line of wait(); `sub` starts at Wait1. A blocked step re-reads
// the spin cell and leaves `sub` unchanged.
WaitResult wait_dsm_step(StepCtx& c, CellId obj, Sub& sub, SigRegs& r);

// Cache-coherent variant: a single Bit cell.
bool signal_cc_step(StepCtx& c, CellId obj, Sub& sub);
WaitResult wait_cc_step(StepCtx& c, CellId obj, Sub& sub);

}  // namespace rme
