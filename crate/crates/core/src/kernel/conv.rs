//! Definitional equality.
//!
//! Values are compared structurally, with η for functions. Two applications
//! of the same defined global are first compared spine-wise without
//! unfolding; only if that fails are both sides unfolded.

use crate::kernel::eval::{EvalResult, Evaluator};
use crate::kernel::value::{Elim, RcValue, Spine, Value};

impl Evaluator<'_> {
    pub fn conv(&self, depth: usize, l: &RcValue, r: &RcValue) -> EvalResult<bool> {
        let l = self.force_metas(l)?;
        let r = self.force_metas(r)?;
        if std::rc::Rc::ptr_eq(&l, &r) {
            return Ok(true);
        }
        match (&*l, &*r) {
            (Value::Glued(g1), Value::Glued(g2)) => {
                if g1.name == g2.name && self.conv_spine(depth, &g1.spine, &g2.spine)? {
                    return Ok(true);
                }
                let l = self.unfold(g1)?;
                let r = self.unfold(g2)?;
                self.conv(depth, &l, &r)
            }
            (Value::Glued(g), _) => {
                let l = self.unfold(g)?;
                self.conv(depth, &l, &r)
            }
            (_, Value::Glued(g)) => {
                let r = self.unfold(g)?;
                self.conv(depth, &l, &r)
            }
            (Value::Lam(_, _, c1), Value::Lam(_, _, c2)) => {
                let x = Value::var(depth);
                let b1 = self.apply_closure(c1, x.clone())?;
                let b2 = self.apply_closure(c2, x)?;
                self.conv(depth + 1, &b1, &b2)
            }
            // η applies only against neutrals; any other shape differs.
            (Value::Lam(_, _, c), Value::Rigid(..) | Value::Flex(..)) => {
                let x = Value::var(depth);
                let b1 = self.apply_closure(c, x.clone())?;
                let b2 = self.apply(&r, x)?;
                self.conv(depth + 1, &b1, &b2)
            }
            (Value::Rigid(..) | Value::Flex(..), Value::Lam(_, _, c)) => {
                let x = Value::var(depth);
                let b1 = self.apply(&l, x.clone())?;
                let b2 = self.apply_closure(c, x)?;
                self.conv(depth + 1, &b1, &b2)
            }
            (Value::Pi(_, _, d1, c1), Value::Pi(_, _, d2, c2)) => {
                if !self.conv(depth, d1, d2)? {
                    return Ok(false);
                }
                let x = Value::var(depth);
                let b1 = self.apply_closure(c1, x.clone())?;
                let b2 = self.apply_closure(c2, x)?;
                self.conv(depth + 1, &b1, &b2)
            }
            (Value::Type(i), Value::Type(j)) => Ok(i == j),
            (Value::Id(t1, a1, b1), Value::Id(t2, a2, b2)) => {
                Ok(self.conv(depth, t1, t2)? && self.conv(depth, a1, a2)? && self.conv(depth, b1, b2)?)
            }
            (Value::Refl(a), Value::Refl(b)) => self.conv(depth, a, b),
            (Value::Rigid(h1, s1), Value::Rigid(h2, s2)) => {
                Ok(h1 == h2 && self.conv_spine(depth, s1, s2)?)
            }
            (Value::Flex(m1, s1), Value::Flex(m2, s2)) => {
                Ok(m1 == m2 && self.conv_spine(depth, s1, s2)?)
            }
            _ => Ok(false),
        }
    }

    pub fn conv_spine(&self, depth: usize, s1: &Spine, s2: &Spine) -> EvalResult<bool> {
        if s1.len() != s2.len() {
            return Ok(false);
        }
        for (e1, e2) in s1.iter().zip(s2) {
            let same = match (e1, e2) {
                (Elim::App(a), Elim::App(b)) => self.conv(depth, a, b)?,
                (
                    Elim::J { motive: m1, base: b1, endpoint: e1 },
                    Elim::J { motive: m2, base: b2, endpoint: e2 },
                ) => {
                    self.conv(depth, m1, m2)? && self.conv(depth, b1, b2)? && self.conv(depth, e1, e2)?
                }
                _ => false,
            };
            if !same {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
