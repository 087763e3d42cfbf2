use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::context::ContextRecord;
use crate::id::EntityId;
use crate::literal::{Decimal, Literal};

/// Geographic coordinates; equality is numeric on every coordinate.
#[derive(Debug, Clone)]
pub struct Point {
    pub latitude: Decimal,
    pub longitude: Decimal,
    pub altitude: Option<Decimal>,
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.latitude.value() == other.latitude.value()
            && self.longitude.value() == other.longitude.value()
            && match (&self.altitude, &other.altitude) {
                (Some(a), Some(b)) => a.value() == b.value(),
                (None, None) => true,
                _ => false,
            }
    }
}

/// Where a context is situated: coordinates and/or symbolic places of
/// increasing granularity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LocationRecord {
    pub point: Option<Point>,
    pub district: Option<String>,
    pub street: Option<String>,
    pub building: Option<String>,
    pub floor: Option<String>,
    pub room: Option<String>,
}

impl LocationRecord {
    pub fn is_empty(&self) -> bool {
        self.point.is_none()
            && self.district.is_none()
            && self.street.is_none()
            && self.building.is_none()
            && self.floor.is_none()
            && self.room.is_none()
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.is_empty() {
            return Err("location has no field".into());
        }
        if self.room.is_some() && self.building.is_none() {
            return Err("room given without building".into());
        }
        if self.floor.is_some() && self.building.is_none() {
            return Err("floor given without building".into());
        }
        Ok(())
    }

    /// Finest granularity class name the record can be asserted into.
    pub fn granularity_class(&self) -> &'static str {
        use super::vocab::class;
        if self.room.is_some() {
            class::ROOM
        } else if self.floor.is_some() {
            class::FLOOR
        } else if self.building.is_some() {
            class::BUILDING
        } else if self.street.is_some() {
            class::STREET
        } else if self.district.is_some() {
            class::DISTRICT
        } else if self.point.is_some() {
            class::POINT
        } else {
            class::LOCATION
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HardwareKind {
    Sensor,
    Actuator,
    ComputeUnit,
    PowerSource,
    Composite,
}

impl HardwareKind {
    pub fn class_name(self) -> &'static str {
        use super::vocab::class;
        match self {
            HardwareKind::Sensor => class::SENSOR,
            HardwareKind::Actuator => class::ACTUATOR,
            HardwareKind::ComputeUnit => class::COMPUTE_UNIT,
            HardwareKind::PowerSource => class::POWER_SOURCE,
            HardwareKind::Composite => class::COMPOSITE_HARDWARE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareRecord {
    pub id: EntityId,
    pub kind: HardwareKind,
    pub capabilities: BTreeSet<EntityId>,
    /// Non-empty exactly when `kind` is `Composite`.
    pub components: Vec<EntityId>,
    pub functioning: bool,
    /// Components without their own context inherit their composite's.
    pub context: Option<ContextRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Role {
    Assisted,
    Caregiver,
}

impl Role {
    pub fn class_name(self) -> &'static str {
        match self {
            Role::Assisted => super::vocab::class::ASSISTED,
            Role::Caregiver => super::vocab::class::CAREGIVER,
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Assisted" => Ok(Role::Assisted),
            "Caregiver" => Ok(Role::Caregiver),
            other => Err(format!("unknown role `{other}`")),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.class_name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PersonRecord {
    pub id: EntityId,
    pub role: Role,
    pub profile: BTreeMap<String, Literal>,
    pub preferences: BTreeMap<String, Literal>,
    /// Only carried by assisted persons.
    pub assistance_needs: BTreeSet<String>,
    /// Only carried by caregivers.
    pub aid_types: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentRecord {
    pub id: EntityId,
    /// Goal tree roots, sorted.
    pub goals: Vec<EntityId>,
    /// Assisted persons this agent serves, sorted.
    pub assists: Vec<EntityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationQuality {
    Satisfying,
    Ambivalent,
    Indifferent,
    Other(String),
}

impl RelationQuality {
    pub fn parse(s: &str) -> Self {
        match s {
            "Satisfying" => RelationQuality::Satisfying,
            "Ambivalent" => RelationQuality::Ambivalent,
            "Indifferent" => RelationQuality::Indifferent,
            other => RelationQuality::Other(other.to_string()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            RelationQuality::Satisfying => "Satisfying",
            RelationQuality::Ambivalent => "Ambivalent",
            RelationQuality::Indifferent => "Indifferent",
            RelationQuality::Other(tag) => tag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationFunction {
    Informational,
    Instrumental,
    Emotional,
}

impl RelationFunction {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationFunction::Informational => "Informational",
            RelationFunction::Instrumental => "Instrumental",
            RelationFunction::Emotional => "Emotional",
        }
    }
}

impl FromStr for RelationFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Informational" => Ok(RelationFunction::Informational),
            "Instrumental" => Ok(RelationFunction::Instrumental),
            "Emotional" => Ok(RelationFunction::Emotional),
            other => Err(format!("unknown relation function `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SocialRelation {
    pub id: EntityId,
    pub from: EntityId,
    pub to: EntityId,
    pub quality: RelationQuality,
    /// Never empty.
    pub functions: BTreeSet<RelationFunction>,
}

impl SocialRelation {
    pub fn links(&self, a: &EntityId, b: &EntityId) -> bool {
        (&self.from == a && &self.to == b) || (&self.from == b && &self.to == a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn location_granularity_chain() {
        let mut loc = LocationRecord {
            room: Some("Bedroom".into()),
            ..Default::default()
        };
        assert!(loc.validate().is_err());
        loc.building = Some("Maison de John".into());
        assert!(loc.validate().is_ok());
        assert_eq!(loc.granularity_class(), "Room");
        assert!(LocationRecord::default().validate().is_err());
        let floor_only = LocationRecord {
            floor: Some("2".into()),
            ..Default::default()
        };
        assert!(floor_only.validate().is_err());
    }

    #[test]
    fn point_equality_is_numeric() {
        let p = |lat: &str| Point {
            latitude: Decimal::parse(lat).unwrap(),
            longitude: Decimal::parse("55.5").unwrap(),
            altitude: None,
        };
        assert_eq!(p("-21.1151"), p("-21.11510"));
        assert_ne!(p("-21.1151"), p("-21.1152"));
    }

    #[test]
    fn quality_escape_hatch() {
        assert_eq!(RelationQuality::parse("Ambivalent"), RelationQuality::Ambivalent);
        assert_eq!(
            RelationQuality::parse("Conflictual"),
            RelationQuality::Other("Conflictual".into())
        );
        assert_eq!(RelationQuality::parse("Conflictual").as_str(), "Conflictual");
    }
}
