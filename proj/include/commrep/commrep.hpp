#pragma once

#include <commrep/certificate.hpp>
#include <commrep/commgraph.hpp>
#include <commrep/errors.hpp>
#include <commrep/field.hpp>
#include <commrep/linalg.hpp>
#include <commrep/matrix.hpp>
#include <commrep/modsplit.hpp>
#include <commrep/search.hpp>
#include <commrep/witness.hpp>
