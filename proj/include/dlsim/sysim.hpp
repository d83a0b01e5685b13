#ifndef DLSIM_SYSIM_HPP
#define DLSIM_SYSIM_HPP

#include "sysim/channel.hpp"
#include "sysim/config.hpp"
#include "sysim/drop.hpp"
#include "sysim/feedback.hpp"
#include "sysim/metrics.hpp"
#include "sysim/scheduler.hpp"
#include "sysim/transmit.hpp"

#endif // DLSIM_SYSIM_HPP
