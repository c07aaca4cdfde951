//! Chemistry substrate for toxicity-cliff mining and scoring.

pub mod aromaticity;
pub mod canon;
pub mod descriptors;
pub mod edit;
pub mod element;
pub mod error;
pub mod fingerprint;
pub mod mol;
pub mod rings;
pub mod safe;
pub mod scaffold;
pub mod smiles;

pub use descriptors::{descriptors, descriptors_mol, DescriptorVector};
pub use edit::{edit_distance, normalized_similarity};
pub use error::ChemError;
pub use fingerprint::{fingerprint, fingerprint_mol, tanimoto, Fingerprint, FingerprintKind};
pub use mol::{Atom, Bond, BondOrder, Mol};
pub use safe::{
    decode_safe, encode_mol, encode_safe, fragment_multiset, strip_attachments, tokenize_fragments,
    FragmentMultiset, FragmentToken, SafeString,
};
pub use scaffold::{murcko_mol, murcko_scaffold};
pub use smiles::{canonical_smiles, canonicalize, CanonicalSmiles};
