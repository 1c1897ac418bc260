#pragma once

// single include for the whole library

#include "entropylab/at.hpp"
#include "entropylab/base_group.hpp"
#include "entropylab/config.hpp"
#include "entropylab/core.hpp"
#include "entropylab/entropy.hpp"
#include "entropylab/groups.hpp"
#include "entropylab/morphisms.hpp"
#include "entropylab/props.hpp"
#include "entropylab/report.hpp"
#include "entropylab/trajectory.hpp"
