#ifndef LCA_LCA_HPP
#define LCA_LCA_HPP

#include "lca/algebra.hpp"
#include "lca/automata.hpp"
#include "lca/geom.hpp"
#include "lca/green.hpp"
#include "lca/io.hpp"
#include "lca/obstruct.hpp"
#include "lca/propb.hpp"
#include "lca/subst.hpp"
#include "lca/xp.hpp"

#endif
