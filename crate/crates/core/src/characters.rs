//! Dirichlet characters with exact root-of-unity arithmetic.
//!
//! The unit group mod `q` is split by the Chinese remainder theorem into
//! cyclic pieces: one cyclic factor per odd prime power (generated by a
//! primitive root), and for `2^k` with `k >= 3` the pair `(-1, 5)`.  A
//! character is a tuple of exponents, one per cyclic factor, and its value
//! at `n` is the root of unity `e(num/den)` whose phase is carried as an
//! exact reduced fraction of a full turn.  All structural predicates
//! (principality, order, conductor, parity) are decided on those fractions,
//! never on floating-point values.

use std::sync::Arc;

use crate::specfun::Compensated;
use crate::{Complex, Error, Result};

/// Largest modulus for which the residue tables are built eagerly.
const MAX_MODULUS: u64 = 10_000_000;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % modulus as u128) as u64;
        }
        base = ((base as u128 * base as u128) % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Smallest primitive root mod an odd prime `p`.
fn primitive_root_mod_p(p: u64) -> u64 {
    let phi = p - 1;
    let factors = factorize(phi);
    'candidate: for g in 2..p {
        for &(f, _) in &factors {
            if mod_pow(g, phi / f, p) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every odd prime has a primitive root below p");
}

/// One cyclic factor of the unit group: `generator` of the given `order`
/// inside the units mod `pk`.
struct Cyclic {
    generator: u64,
    order: u64,
}

struct GroupInner {
    modulus: u64,
    phi: u64,
    /// Orders of the cyclic factors, in a fixed deterministic order
    /// (ascending prime, with the `-1` factor before the `5` factor at 2).
    cyclic_orders: Vec<u64>,
    /// For each residue `r mod q`: the exponent tuple of `r` with respect to
    /// the cyclic generators, or `None` when `gcd(r, q) > 1`.
    dlogs: Vec<Option<Vec<u64>>>,
}

/// The full character group mod `q`, holding the shared discrete-log tables.
pub struct CharacterGroup {
    inner: Arc<GroupInner>,
}

impl CharacterGroup {
    /// Builds the unit-group decomposition and residue tables for modulus `q`.
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus == 0 || modulus > MAX_MODULUS {
            return Err(Error::InvalidInput {
                what: "CharacterGroup",
                detail: format!("modulus {modulus} outside 1..={MAX_MODULUS}"),
            });
        }
        // Per prime power: the cyclic factors and a local dlog table.
        struct Component {
            pk: u64,
            cyclics: Vec<Cyclic>,
            /// residue mod pk -> exponents (None if p divides the residue)
            table: Vec<Option<Vec<u64>>>,
        }
        let mut components = Vec::new();
        for (p, k) in factorize(modulus) {
            let pk = p.pow(k);
            let cyclics = if p == 2 {
                match k {
                    1 => vec![],
                    2 => vec![Cyclic { generator: pk - 1, order: 2 }],
                    _ => vec![
                        Cyclic { generator: pk - 1, order: 2 },
                        Cyclic { generator: 5, order: pk / 4 },
                    ],
                }
            } else {
                let mut g = primitive_root_mod_p(p);
                if k >= 2 && mod_pow(g, p - 1, p * p) == 1 {
                    g += p; // lift to a primitive root mod every power of p
                }
                vec![Cyclic { generator: g, order: pk - pk / p }]
            };
            // Enumerate the unit group once to fill the local dlog table:
            // walk the direct product of the cyclic factors.
            let mut table: Vec<Option<Vec<u64>>> = vec![None; pk as usize];
            let mut residues = vec![(1u64 % pk, Vec::<u64>::new())];
            for cyc in &cyclics {
                let mut next = Vec::with_capacity(residues.len() * cyc.order as usize);
                for (r, exps) in &residues {
                    let mut val = *r;
                    for e in 0..cyc.order {
                        if e > 0 {
                            val = ((val as u128 * cyc.generator as u128) % pk as u128) as u64;
                        }
                        let mut ex = exps.clone();
                        ex.push(e);
                        next.push((val, ex));
                    }
                }
                residues = next;
            }
            for (r, exps) in residues {
                table[r as usize] = Some(exps);
            }
            components.push(Component { pk, cyclics, table });
        }

        let cyclic_orders: Vec<u64> = components
            .iter()
            .flat_map(|c| c.cyclics.iter().map(|cy| cy.order))
            .collect();
        // phi(q) is the product of the cyclic orders (the factorless
        // components 2^1 contribute phi = 1).
        let phi: u64 = cyclic_orders.iter().product();

        let mut dlogs: Vec<Option<Vec<u64>>> = Vec::with_capacity(modulus as usize);
        for r in 0..modulus {
            let mut exps = Vec::with_capacity(cyclic_orders.len());
            let mut ok = true;
            for comp in &components {
                match &comp.table[(r % comp.pk) as usize] {
                    Some(local) => exps.extend_from_slice(local),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            dlogs.push(if ok { Some(exps) } else { None });
        }

        Ok(CharacterGroup {
            inner: Arc::new(GroupInner { modulus, phi, cyclic_orders, dlogs }),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    /// Number of characters, `phi(q)`.
    pub fn num_characters(&self) -> u64 {
        self.inner.phi
    }

    /// The principal character (all exponents zero).
    pub fn principal(&self) -> DirichletCharacter {
        DirichletCharacter {
            group: Arc::clone(&self.inner),
            exponents: vec![0; self.inner.cyclic_orders.len()],
        }
    }

    /// The character with the given exponent tuple.
    pub fn character(&self, exponents: &[u64]) -> Result<DirichletCharacter> {
        if exponents.len() != self.inner.cyclic_orders.len() {
            return Err(Error::InvalidInput {
                what: "CharacterGroup::character",
                detail: format!(
                    "expected {} exponents, got {}",
                    self.inner.cyclic_orders.len(),
                    exponents.len()
                ),
            });
        }
        let exponents = exponents
            .iter()
            .zip(&self.inner.cyclic_orders)
            .map(|(e, o)| e % o)
            .collect();
        Ok(DirichletCharacter { group: Arc::clone(&self.inner), exponents })
    }

    /// All characters, in lexicographic exponent order (deterministic).
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        let mut out = vec![self.principal()];
        for (i, &ord) in self.inner.cyclic_orders.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * ord as usize);
            for ch in &out {
                for e in 0..ord {
                    let mut exps = ch.exponents.clone();
                    exps[i] = e;
                    next.push(DirichletCharacter {
                        group: Arc::clone(&self.inner),
                        exponents: exps,
                    });
                }
            }
            out = next;
        }
        out
    }
}

/// A Dirichlet character mod `q`, stored as exponents against the group's
/// cyclic generators.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<GroupInner>,
    exponents: Vec<u64>,
}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Exact phase of `chi(n)` as a reduced fraction `(num, den)` of a full
    /// turn, or `None` when `gcd(n, q) > 1`.
    pub fn phase(&self, n: u64) -> Option<(u64, u64)> {
        let r = (n % self.group.modulus) as usize;
        let exps = self.group.dlogs[r].as_ref()?;
        let mut num = 0u64;
        let mut den = 1u64;
        for ((e, d), o) in self.exponents.iter().zip(exps).zip(&self.group.cyclic_orders) {
            // add e*d/o to num/den
            let g = gcd((e * d) % o, *o);
            let (n2, d2) = if (e * d) % o == 0 { (0, 1) } else { ((e * d % o) / g, o / g) };
            let l = lcm(den, d2);
            num = (num * (l / den) + n2 * (l / d2)) % l;
            den = l;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
        Some((num, den))
    }

    /// `chi(n)` as a complex number (`0` off the coprime residues).
    pub fn eval(&self, n: u64) -> Complex {
        match self.phase(n) {
            None => Complex::new(0.0, 0.0),
            Some((num, den)) => root_of_unity(num, den),
        }
    }

    /// True when every coprime residue maps to 1.
    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(&self.group.cyclic_orders)
            .map(|(&e, &o)| if e == 0 { 1 } else { o / gcd(e, o) })
            .fold(1, lcm)
    }

    /// `+1` for even characters (`chi(-1) = 1`), `-1` for odd.
    pub fn parity(&self) -> i32 {
        match self.phase(self.group.modulus - 1) {
            Some((0, _)) => 1,
            _ => -1,
        }
    }

    /// Pointwise complex conjugate (inverse character).
    pub fn conjugate(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(&self.group.cyclic_orders)
            .map(|(&e, &o)| (o - e) % o)
            .collect();
        DirichletCharacter { group: Arc::clone(&self.group), exponents }
    }

    /// Pointwise product of two characters of the same modulus.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group.modulus != other.group.modulus {
            return Err(Error::InvalidInput {
                what: "DirichletCharacter::multiply",
                detail: format!(
                    "moduli differ: {} vs {}",
                    self.group.modulus, other.group.modulus
                ),
            });
        }
        let exponents = self
            .exponents
            .iter()
            .zip(&other.exponents)
            .zip(&self.group.cyclic_orders)
            .map(|((&a, &b), &o)| (a + b) % o)
            .collect();
        Ok(DirichletCharacter { group: Arc::clone(&self.group), exponents })
    }

    /// Smallest divisor `d | q` such that the character is trivial on the
    /// subgroup `{ n ≡ 1 mod d, gcd(n, q) = 1 }`.
    pub fn conductor(&self) -> u64 {
        let q = self.group.modulus;
        let mut divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
        divisors.sort_unstable();
        'outer: for d in divisors {
            let mut n = 1u64;
            while n <= q {
                if self.group.dlogs[(n % q) as usize].is_some()
                    && !matches!(self.phase(n), Some((0, _)))
                {
                    continue 'outer; // nontrivial on the kernel: d too small
                }
                n += d;
            }
            return d;
        }
        q
    }

    /// True when the conductor equals the modulus.
    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.group.modulus
    }

    /// The primitive character that induces this one, together with its
    /// modulus (the conductor).
    pub fn primitive_part(&self) -> Result<(u64, DirichletCharacter)> {
        let d = self.conductor();
        let q = self.group.modulus;
        if d == q {
            return Ok((d, self.clone()));
        }
        let sub = CharacterGroup::new(d)?;
        // chi*(r) for gcd(r, d) = 1: evaluate chi at any n ≡ r (mod d)
        // that is coprime to q; match against the characters mod d.
        'cand: for cand in sub.characters() {
            for r in 1..=d {
                if gcd(r, d) != 1 {
                    continue;
                }
                let mut n = r;
                while gcd(n, q) != 1 {
                    n += d;
                }
                if cand.phase(r) != self.phase(n) {
                    continue 'cand;
                }
            }
            return Ok((d, cand));
        }
        unreachable!("a character of conductor d is induced by one mod d");
    }

    /// Gauss sum `sum_r chi(r) e(r/q)`; defined here for primitive
    /// characters only.
    pub fn gauss_sum(&self) -> Result<Complex> {
        let q = self.group.modulus;
        let cond = self.conductor();
        if cond != q {
            return Err(Error::NonPrimitiveCharacter { modulus: q, conductor: cond });
        }
        let mut re = Compensated::default();
        let mut im = Compensated::default();
        for r in 1..=q {
            if let Some((num, den)) = self.phase(r) {
                // chi(r) e(r/q): add the phases exactly before evaluating
                let l = lcm(den, q);
                let total = (num * (l / den) + r * (l / q)) % l;
                let z = root_of_unity(total, l);
                re.add(z.re);
                im.add(z.im);
            }
        }
        Ok(Complex::new(re.value(), im.value()))
    }
}

/// `e(num/den)` with exact values on the axes.
fn root_of_unity(num: u64, den: u64) -> Complex {
    debug_assert!(num < den || (num == 0 && den == 1));
    match (4 * num) % den {
        0 if num * 4 == den => Complex::new(0.0, 1.0),
        0 if num * 2 == den => Complex::new(-1.0, 0.0),
        0 if num * 4 == 3 * den => Complex::new(0.0, -1.0),
        0 if num == 0 => Complex::new(1.0, 0.0),
        _ => {
            let theta = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
            Complex::new(theta.cos(), theta.sin())
        }
    }
}

/// Finds the unique character mod `modulus` matching the coefficient values
/// `values[n-1] ~ chi(n)` within `tol`.
pub fn detect(modulus: u64, values: &[Complex], tol: f64) -> Result<DirichletCharacter> {
    let group = CharacterGroup::new(modulus)?;
    let mut found: Option<DirichletCharacter> = None;
    for ch in group.characters() {
        let mut ok = true;
        for (i, v) in values.iter().enumerate() {
            let n = (i + 1) as u64;
            if (ch.eval(n) - v).norm() > tol {
                ok = false;
                break;
            }
        }
        if ok {
            if found.is_some() {
                return Err(Error::NoSuchCharacter {
                    modulus,
                    detail: "coefficient prefix matches more than one character; \
                             supply more terms"
                        .into(),
                });
            }
            found = Some(ch);
        }
    }
    found.ok_or_else(|| Error::NoSuchCharacter {
        modulus,
        detail: format!("no character matches the {} supplied values", values.len()),
    })
}
