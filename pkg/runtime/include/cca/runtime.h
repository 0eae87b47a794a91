// Umbrella header consumed by generated hulls and system bootstraps.
#ifndef CCA_RUNTIME_RUNTIME_H
#define CCA_RUNTIME_RUNTIME_H

#include "cca/component.h"
#include "cca/kinds.h"
#include "cca/port.h"
#include "cca/scheduler.h"

#endif  // CCA_RUNTIME_RUNTIME_H
