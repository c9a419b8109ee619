#pragma once

#include "cgr/chem/canon.hpp"
#include "cgr/chem/elements.hpp"
#include "cgr/chem/fingerprint.hpp"
#include "cgr/chem/graph.hpp"
#include "cgr/chem/parse.hpp"
#include "cgr/chem/rc.hpp"
#include "cgr/chem/validate.hpp"
#include "cgr/chem/write.hpp"
