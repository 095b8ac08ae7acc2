#pragma once

#include "endoscopy/exactnum.hpp"
#include "endoscopy/lattice.hpp"
#include "endoscopy/rootdata.hpp"
#include "endoscopy/realstructure.hpp"
#include "endoscopy/covers.hpp"
#include "endoscopy/cohomology.hpp"
#include "endoscopy/characters.hpp"
#include "endoscopy/endoscopy.hpp"
#include "endoscopy/catalog.hpp"
#include "endoscopy/verify.hpp"
#include "endoscopy/invariants.hpp"
