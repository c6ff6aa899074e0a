//! Central extensions of abelian groups: the free central extension
//! `F^c(A)`, the pullback cover of a class-2 group, isoclinism, and the
//! quaternion-triple embedding.

mod fc;

use std::sync::Arc;

pub use fc::{fc_model, FcElement, FcGroup, FC_PAIRWISE_LIMIT};

use crate::abelian::{abelian_basis, AbelianBasis, AbelianGroup};
use crate::catalog::{quaternion, quaternion_mul};
use crate::error::{GroupError, Result};
use crate::group::{
    center, close_group_with_degree, derived_subgroup, for_each_isomorphism, hom_from_images,
    quotient_group, GroupHom, GroupRef, Quotient, Subgroup,
};
use crate::limits::Limits;
use crate::perm::Permutation;

/// A central extension `1 -> Z -> G^c -> A -> 1` with `A` abelian, together
/// with an explicit basis of `A` used to read off coordinates.
#[derive(Clone, Debug)]
pub struct CentralExtensionData {
    pub group: GroupRef,
    pub central_kernel: Subgroup,
    pub abelian_quotient: AbelianGroup,
    pub quotient: Arc<QuotientWithBasis>,
}

#[derive(Debug)]
pub struct QuotientWithBasis {
    pub group: GroupRef,
    pub projection: GroupHom,
    pub basis: AbelianBasis,
}

impl CentralExtensionData {
    /// Coordinates in `A` of the image of `x ∈ G^c`.
    pub fn coordinates(&self, x: usize) -> &[u64] {
        let q = &self.quotient;
        &q.basis.coordinates[q.projection.apply(x)]
    }
}

/// Recognizes `G` as a central extension of an abelian group.
///
/// Returns `None` unless `[G, G] ⊆ Z(G)`. For abelian `G` the kernel is the
/// trivial subgroup and `A = G`; otherwise the kernel is the full center.
pub fn detect_central_extension(g: &GroupRef) -> Option<CentralExtensionData> {
    let z = center(g);
    if !derived_subgroup(g).is_subset_of(&z) {
        return None;
    }
    let kernel = if g.is_abelian() {
        Subgroup::trivial(g)
    } else {
        z
    };
    let Quotient { group, projection } =
        quotient_group(g, &kernel).expect("central subgroups are normal");
    let basis =
        abelian_basis(&group).expect("quotient by a central subgroup containing [G,G] is abelian");
    Some(CentralExtensionData {
        group: g.clone(),
        central_kernel: kernel,
        abelian_quotient: basis.structure.clone(),
        quotient: Arc::new(QuotientWithBasis {
            group,
            projection,
            basis,
        }),
    })
}

/// The fiber product `E = F^c(A) x_A G^c` with its projection to `G^c`.
#[derive(Clone, Debug)]
pub struct PullbackCover {
    pub fc: FcGroup,
    /// `E`, acting on `|F^c|` regular points followed by the points of `G^c`.
    pub cover: GroupRef,
    pub projection: GroupHom,
    pub kernel: Subgroup,
}

impl PullbackCover {
    /// The `F^c(A)` component of an element of `E`.
    pub fn fc_component(&self, e: usize) -> FcElement {
        self.fc.decode(self.cover.element(e).apply(0) as usize)
    }
}

/// Builds the pullback cover and verifies exactness: the projection is
/// surjective, its kernel is central, abelian and of order `|∧²A|`, and every
/// element `(f, g)` satisfies `a(f) = a(g)`.
pub fn pullback_cover(data: &CentralExtensionData, limits: &Limits) -> Result<PullbackCover> {
    let fc = FcGroup::new(data.abelian_quotient.clone());
    let g = &data.group;
    let target = fc.order() * g.order() as u128 / data.abelian_quotient.order() as u128;
    if fc.order() > limits.max_order as u128 || target > limits.max_order as u128 {
        return Err(GroupError::limit(
            "pullback cover order",
            limits.max_order as u128,
        ));
    }
    let nf = fc.order() as usize;
    let degree = nf + g.degree();
    let pair_perm = |f: &FcElement, x: &Permutation| {
        let mut images: Vec<u32> = (0..nf)
            .map(|y| fc.encode(&fc.mul(f, &fc.decode(y))) as u32)
            .collect();
        images.extend(x.images().iter().map(|&p| p + nf as u32));
        Permutation::from_images_unchecked(images)
    };
    let identity = Permutation::identity(g.degree());
    let mut gens: Vec<Permutation> = g
        .generators()
        .iter()
        .map(|&s| pair_perm(&fc.lift(data.coordinates(s)), g.element(s)))
        .collect();
    gens.extend((0..fc.pairs().len()).map(|p| pair_perm(&fc.central_basis(p), &identity)));
    let cover = Arc::new(close_group_with_degree(degree, &gens, limits.max_order)?);
    if cover.order() as u128 != target {
        return Err(GroupError::InvalidInput(format!(
            "pullback cover has order {}, expected {target}",
            cover.order()
        )));
    }
    let images: Vec<usize> = cover
        .elements()
        .iter()
        .map(|e| {
            let x = Permutation::from_images_unchecked(
                e.images()[nf..].iter().map(|&p| p - nf as u32).collect(),
            );
            g.index_of(&x).expect("second component lies in G^c")
        })
        .collect();
    let projection = GroupHom::new(cover.clone(), g.clone(), images)?;
    let kernel = projection.kernel();
    let out = PullbackCover {
        fc,
        cover,
        projection,
        kernel,
    };
    verify_pullback(data, &out)?;
    Ok(out)
}

fn verify_pullback(data: &CentralExtensionData, pc: &PullbackCover) -> Result<()> {
    let e = &pc.cover;
    let fail = |m: &str| Err(GroupError::InvalidInput(format!("pullback cover: {m}")));
    if !pc.projection.is_surjective() {
        return fail("projection is not surjective");
    }
    if pc.kernel.order() as u64 != pc.fc.commutator_part().order() {
        return fail("kernel order differs from |∧²A|");
    }
    if !pc.kernel.is_abelian(e) {
        return fail("kernel is not abelian");
    }
    if !pc.kernel.is_subset_of(&center(e)) {
        return fail("kernel is not central");
    }
    for x in 0..e.order() {
        if pc.fc_component(x).a != data.coordinates(pc.projection.apply(x)) {
            return fail("components disagree in A");
        }
    }
    Ok(())
}

/// Central quotient and derived subgroup of one side of an isoclinism.
#[derive(Clone, Debug)]
pub struct IsoclinismSide {
    pub group: GroupRef,
    pub projection: GroupHom,
    pub derived: Subgroup,
    pub derived_group: GroupRef,
    /// A preimage of every element of the central quotient.
    lifts: Vec<usize>,
}

impl IsoclinismSide {
    pub fn new(g: &GroupRef, limits: &Limits) -> Result<IsoclinismSide> {
        let quotient = quotient_group(g, &center(g))?;
        let derived = derived_subgroup(g);
        for (what, n) in [
            ("central quotient order", quotient.group.order()),
            ("derived subgroup order", derived.order()),
        ] {
            if n > limits.search_limit {
                return Err(GroupError::limit(what, limits.search_limit as u128));
            }
        }
        let mut lifts = vec![usize::MAX; quotient.group.order()];
        for x in (0..g.order()).rev() {
            lifts[quotient.projection.apply(x)] = x;
        }
        Ok(IsoclinismSide {
            group: g.clone(),
            derived_group: Arc::new(derived.to_group(g)),
            derived,
            projection: quotient.projection,
            lifts,
        })
    }

    pub fn central_quotient(&self) -> &GroupRef {
        self.projection.codomain()
    }

    /// Position in the derived subgroup of `[x̃, ỹ]` for classes `x, y`.
    fn commutator_of_classes(&self, x: usize, y: usize) -> usize {
        let c = self.group.commutator(self.lifts[x], self.lifts[y]);
        self.derived
            .position(c)
            .expect("commutators lie in the derived subgroup")
    }
}

#[derive(Clone, Debug)]
pub struct IsoclinismWitness {
    pub left: IsoclinismSide,
    pub right: IsoclinismSide,
    pub central_quotient_iso: GroupHom,
    pub derived_iso: GroupHom,
}

impl IsoclinismWitness {
    /// Re-checks both isomorphisms and commutator compatibility on every
    /// pair of classes.
    pub fn verify(&self) -> Result<()> {
        for iso in [&self.central_quotient_iso, &self.derived_iso] {
            iso.validate()?;
            if !iso.is_bijective() {
                return Err(GroupError::InvalidInput(
                    "witness map is not bijective".into(),
                ));
            }
        }
        if compatible_derived_map(&self.left, &self.right, &self.central_quotient_iso)
            .map(|m| m.images().eq(self.derived_iso.images()))
            != Some(true)
        {
            return Err(GroupError::InvalidInput(
                "derived map is not compatible with commutators".into(),
            ));
        }
        Ok(())
    }
}

/// The derived map forced by `alpha`, if it is well defined and an
/// isomorphism: `[x̃, ỹ] -> [α(x)~, α(y)~]`.
fn compatible_derived_map(
    left: &IsoclinismSide,
    right: &IsoclinismSide,
    alpha: &GroupHom,
) -> Option<GroupHom> {
    let n = left.central_quotient().order();
    let mut table = vec![usize::MAX; left.derived.order()];
    let mut gens = Vec::new();
    let mut images = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let c = left.commutator_of_classes(x, y);
            let d = right.commutator_of_classes(alpha.apply(x), alpha.apply(y));
            if table[c] == usize::MAX {
                table[c] = d;
                gens.push(c);
                images.push(d);
            } else if table[c] != d {
                return None;
            }
        }
    }
    let beta = hom_from_images(
        left.derived_group.clone(),
        right.derived_group.clone(),
        &gens,
        &images,
    )
    .ok()?;
    beta.is_bijective().then_some(beta)
}

/// Searches for an isoclinism `G ~ H`: an isomorphism of central quotients
/// whose induced map on commutators extends to an isomorphism of derived
/// subgroups. Every isomorphism of central quotients is tried.
pub fn is_isoclinic(
    g: &GroupRef,
    h: &GroupRef,
    limits: &Limits,
) -> Result<Option<IsoclinismWitness>> {
    let left = IsoclinismSide::new(g, limits)?;
    let right = IsoclinismSide::new(h, limits)?;
    if left.derived.order() != right.derived.order() {
        return Ok(None);
    }
    let mut derived = None;
    let found = for_each_isomorphism(
        left.central_quotient(),
        right.central_quotient(),
        limits,
        |alpha| {
            derived = compatible_derived_map(&left, &right, alpha);
            derived.is_some()
        },
    )?;
    let (Some(alpha), Some(beta)) = (found, derived) else {
        return Ok(None);
    };
    let witness = IsoclinismWitness {
        left,
        right,
        central_quotient_iso: alpha,
        derived_iso: beta,
    };
    witness.verify()?;
    Ok(Some(witness))
}

/// `F̃ ≤ Q8 x Q8 x Q8` generated by `(1, i, i)`, `(i, 1, j)`, `(j, j, 1)`.
#[derive(Clone, Debug)]
pub struct QuaternionTriple {
    /// Acts on three blocks of 8 points, block `b` carrying the left regular
    /// action of the `b`-th coordinate.
    pub group: GroupRef,
    pub factor: GroupRef,
    pub generators: [usize; 3],
    pub projections: Vec<GroupHom>,
}

impl QuaternionTriple {
    /// Quaternion codes of the three coordinates (see [`crate::catalog`]).
    pub fn codes(&self, x: usize) -> [usize; 3] {
        let p = self.group.element(x);
        [0, 1, 2].map(|b| p.apply(8 * b) as usize - 8 * b as usize)
    }

    pub fn element_with_codes(&self, codes: [usize; 3]) -> Option<usize> {
        self.group.index_of(&triple_perm(codes))
    }
}

fn triple_perm(codes: [usize; 3]) -> Permutation {
    let images = (0..24)
        .map(|p| {
            let (b, x) = (p / 8, p % 8);
            (8 * b + quaternion_mul(codes[b], x)) as u32
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

pub fn fc_in_quaternions() -> QuaternionTriple {
    const ONE: usize = 0;
    const I: usize = 1;
    const J: usize = 2;
    let gens = [[ONE, I, I], [I, ONE, J], [J, J, ONE]].map(triple_perm);
    let group = Arc::new(close_group_with_degree(24, &gens, 512).expect("order 64"));
    let factor = Arc::new(quaternion());
    let factor_index: Vec<usize> = (0..8)
        .map(|code| {
            (0..8)
                .find(|&x| factor.element(x).apply(0) as usize == code)
                .expect("regular representation")
        })
        .collect();
    let generators = gens.map(|p| group.index_of(&p).expect("generator"));
    let mut triple = QuaternionTriple {
        group: group.clone(),
        factor: factor.clone(),
        generators,
        projections: Vec::new(),
    };
    for b in 0..3 {
        let images = (0..group.order())
            .map(|x| factor_index[triple.codes(x)[b]])
            .collect();
        triple.projections.push(
            GroupHom::new(group.clone(), factor.clone(), images).expect("coordinate projection"),
        );
    }
    triple
}

/// `FiniteGroup` of `F^c(A)` in its regular representation.
pub fn fc_group(base: &AbelianGroup, limits: &Limits) -> Result<GroupRef> {
    Ok(fc_model(base, limits.max_order)?.1)
}
