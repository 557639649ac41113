#pragma once

#include "dissipative/oracle/discrete_bath.hpp"
#include "dissipative/oracle/gaussian_entropy.hpp"
#include "dissipative/oracle/ring_kernel.hpp"
#include "dissipative/oracle/spin_boson_ed.hpp"
#include "dissipative/oracle/trace_power.hpp"
