#ifndef CONEX_CONEX_HPP
#define CONEX_CONEX_HPP

#include "rational.hpp"
#include "chart.hpp"
#include "coefficient.hpp"
#include "forms.hpp"
#include "linalg.hpp"
#include "poisson.hpp"
#include "homology.hpp"
#include "trig_roots.hpp"
#include "cone.hpp"
#include "smooth_structure.hpp"
#include "random_forms.hpp"

#endif
