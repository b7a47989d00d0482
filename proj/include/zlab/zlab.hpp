#pragma once

#include "core.hpp"
#include "lattice.hpp"
#include "radial.hpp"
#include "quadrature.hpp"
#include "fft.hpp"
#include "fields.hpp"
#include "fit.hpp"
#include "report.hpp"
#include "trilinear.hpp"
#include "experiments.hpp"
#include "diophantine.hpp"
#include "picard.hpp"
#include "zakharov.hpp"
#include "registry.hpp"
#include "acceptance.hpp"
