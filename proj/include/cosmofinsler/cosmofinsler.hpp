#pragma once

#include "cosmofinsler/classify.hpp"
#include "cosmofinsler/cosmo_geometry.hpp"
#include "cosmofinsler/errors.hpp"
#include "cosmofinsler/geodesics.hpp"
#include "cosmofinsler/io.hpp"
#include "cosmofinsler/jet.hpp"
#include "cosmofinsler/oracle.hpp"
#include "cosmofinsler/profiles.hpp"
#include "cosmofinsler/rng.hpp"
#include "cosmofinsler/sampling.hpp"
#include "cosmofinsler/scale_function.hpp"
#include "cosmofinsler/spacetime.hpp"
#include "cosmofinsler/spatial.hpp"
#include "cosmofinsler/tensors.hpp"
#include "cosmofinsler/verify.hpp"
