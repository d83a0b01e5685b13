#ifndef DLSIM_DLSIM_HPP
#define DLSIM_DLSIM_HPP

#include "calibration.hpp"
#include "cqi_map.hpp"
#include "crc.hpp"
#include "effective_sinr.hpp"
#include "linksim.hpp"
#include "lut.hpp"
#include "modem.hpp"
#include "mutual_information.hpp"
#include "numerology.hpp"
#include "sysim.hpp"
#include "turbo.hpp"
#include "version.hpp"

#endif // DLSIM_DLSIM_HPP
