use super::engine::Bracket;
use crate::error::Result;
use crate::scalars::{LambdaMonomial, Scalar};
use crate::terms::{Algebra, FieldExpr, Parity};

impl Algebra {
    /// Non-commutative Wick formula for `[a_Λ :b c:]` evaluated from its
    /// three pieces; agrees with `lambda_bracket(a, :b c:)`.
    pub fn wick(&self, a: &FieldExpr, b: &FieldExpr, c: &FieldExpr) -> Result<Bracket> {
        let na = self.normalize(a)?;
        let nb = self.normalize(b)?;
        let nc = self.normalize(c)?;
        let pa = a.parity()?.unwrap_or(Parity::Even);
        let pb = b.parity()?.unwrap_or(Parity::Even);

        let ab = self.bracket_checked(&na, &nb)?;
        let ac = self.bracket_checked(&na, &nc)?;
        let mut out = Bracket::zero();
        for (m, x) in ab.terms() {
            out.add_term(*m, self.nop(x, &nc));
        }
        let base_neg = pa.flip().sign_with(pb);
        for (m, x) in ac.terms() {
            let neg = base_neg ^ (m.chi && pb.is_odd());
            let v = self.nop(&nb, x);
            out.add_term(*m, if neg { v.neg() } else { v });
        }
        for (m, x) in ab.terms() {
            let inner = self.bracket(x, &nc);
            for (mi, d) in inner.terms() {
                if mi.chi {
                    let k = mi.lambda;
                    out.add_term(LambdaMonomial::new(m.lambda + k + 1, m.chi), d.scale(&Scalar::frac(1, k as i64 + 1)));
                }
            }
        }
        Ok(out)
    }
}
