#ifndef MCX_MCX_HPP
#define MCX_MCX_HPP

#include "mcx/acceptance.hpp"
#include "mcx/contact.hpp"
#include "mcx/core.hpp"
#include "mcx/descriptors.hpp"
#include "mcx/gallery.hpp"
#include "mcx/io.hpp"
#include "mcx/legendre.hpp"
#include "mcx/mmot.hpp"
#include "mcx/monotone.hpp"
#include "mcx/multiconj.hpp"
#include "mcx/multiconj_checks.hpp"
#include "mcx/report.hpp"
#include "mcx/transforms.hpp"

#endif  // MCX_MCX_HPP
