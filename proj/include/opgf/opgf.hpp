#ifndef OPGF_OPGF_HPP
#define OPGF_OPGF_HPP

#include "opgf/errors.hpp"
#include "opgf/genfun.hpp"
#include "opgf/identities.hpp"
#include "opgf/measures.hpp"
#include "opgf/polynomial.hpp"
#include "opgf/recurrence.hpp"
#include "opgf/report.hpp"
#include "opgf/riccati.hpp"
#include "opgf/special.hpp"
#include "opgf/version.hpp"

#endif // OPGF_OPGF_HPP
