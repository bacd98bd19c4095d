#pragma once

// Umbrella header for the whole library.

#include "fauxpas/belief.hpp"
#include "fauxpas/dist.hpp"
#include "fauxpas/errors.hpp"
#include "fauxpas/history.hpp"
#include "fauxpas/listener.hpp"
#include "fauxpas/oracle.hpp"
#include "fauxpas/report.hpp"
#include "fauxpas/scenario.hpp"
#include "fauxpas/semantics.hpp"
#include "fauxpas/speaker.hpp"
#include "fauxpas/world.hpp"
