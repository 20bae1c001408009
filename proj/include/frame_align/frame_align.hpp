#pragma once

#include "frame_align/half_int.hpp"
#include "frame_align/euler.hpp"
#include "frame_align/su2.hpp"
#include "frame_align/legendre.hpp"
#include "frame_align/quadrature.hpp"
#include "frame_align/states.hpp"
#include "frame_align/tridiag.hpp"
#include "frame_align/fidelity.hpp"
#include "frame_align/povm.hpp"
#include "frame_align/povm_io.hpp"
#include "frame_align/channel.hpp"
