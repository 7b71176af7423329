#ifndef LLGTW_LLGTW_HPP
#define LLGTW_LLGTW_HPP

#include "llgtw/error.hpp"
#include "llgtw/model.hpp"
#include "llgtw/stencil.hpp"
#include "llgtw/energetics.hpp"
#include "llgtw/staticsol.hpp"
#include "llgtw/band_lu.hpp"
#include "llgtw/spectral.hpp"
#include "llgtw/twsolve.hpp"
#include "llgtw/dynamics.hpp"
#include "llgtw/io.hpp"
#include "llgtw/acceptance.hpp"

#endif  // LLGTW_LLGTW_HPP
