//! Names of the shipped smart-city vocabulary.

use crate::id::EntityId;

pub const PREFIX: &str = "sc";
pub const NAMESPACE: &str = "http://ambient.local/smartcity#";

/// Builds an id in the `sc:` namespace.
///
/// Panics on an invalid local name; meant for the constants below and for
/// fixtures, not for user input.
pub fn sc(local: &str) -> EntityId {
    EntityId::new(PREFIX, local).unwrap_or_else(|e| panic!("bad vocabulary name: {e}"))
}

pub mod class {
    pub const THING: &str = "Thing";
    pub const HARDWARE: &str = "Hardware";
    pub const DEVICE: &str = "Device";
    pub const SENSOR: &str = "Sensor";
    pub const ACTUATOR: &str = "Actuator";
    pub const APPLIANCE: &str = "Appliance";
    pub const COMPUTE_UNIT: &str = "ComputeUnit";
    pub const POWER_SOURCE: &str = "PowerSource";
    pub const COMPOSITE_HARDWARE: &str = "CompositeHardware";
    pub const USER: &str = "User";
    pub const PERSON: &str = "Person";
    pub const ASSISTED: &str = "Assisted";
    pub const CAREGIVER: &str = "Caregiver";
    pub const AGENT: &str = "Agent";
    pub const LOCATION: &str = "Location";
    pub const POINT: &str = "Point";
    pub const DISTRICT: &str = "District";
    pub const STREET: &str = "Street";
    pub const BUILDING: &str = "Building";
    pub const FLOOR: &str = "Floor";
    pub const ROOM: &str = "Room";
    pub const CONTEXT: &str = "Context";
    pub const ACTIVITY: &str = "Activity";
    pub const SCHEDULED_ACTIVITY: &str = "ScheduledActivity";
    pub const DEDUCED_ACTIVITY: &str = "DeducedActivity";
    pub const EXECUTED_ACTIVITY: &str = "ExecutedActivity";
    pub const ACTION: &str = "Action";
    pub const CAPABILITY: &str = "Capability";
    pub const GOAL: &str = "Goal";
    pub const SOCIAL_RELATION: &str = "SocialRelation";

    pub const ALL: &[&str] = &[
        THING,
        HARDWARE,
        DEVICE,
        SENSOR,
        ACTUATOR,
        APPLIANCE,
        COMPUTE_UNIT,
        POWER_SOURCE,
        COMPOSITE_HARDWARE,
        USER,
        PERSON,
        ASSISTED,
        CAREGIVER,
        AGENT,
        LOCATION,
        POINT,
        DISTRICT,
        STREET,
        BUILDING,
        FLOOR,
        ROOM,
        CONTEXT,
        ACTIVITY,
        SCHEDULED_ACTIVITY,
        DEDUCED_ACTIVITY,
        EXECUTED_ACTIVITY,
        ACTION,
        CAPABILITY,
        GOAL,
        SOCIAL_RELATION,
    ];

    /// Direct subclass links of the hierarchy, `(sub, sup)`.
    pub const HIERARCHY: &[(&str, &str)] = &[
        (SENSOR, DEVICE),
        (ACTUATOR, DEVICE),
        (DEVICE, HARDWARE),
        (COMPUTE_UNIT, APPLIANCE),
        (POWER_SOURCE, APPLIANCE),
        (APPLIANCE, HARDWARE),
        (COMPOSITE_HARDWARE, HARDWARE),
        (PERSON, USER),
        (ASSISTED, PERSON),
        (CAREGIVER, PERSON),
        (AGENT, USER),
        (POINT, LOCATION),
        (DISTRICT, LOCATION),
        (STREET, LOCATION),
        (BUILDING, LOCATION),
        (FLOOR, LOCATION),
        (ROOM, LOCATION),
        (SCHEDULED_ACTIVITY, ACTIVITY),
        (DEDUCED_ACTIVITY, ACTIVITY),
        (EXECUTED_ACTIVITY, ACTIVITY),
    ];
}

pub mod prop {
    pub const HAS_COMPONENT: &str = "hasComponent";
    pub const HAS_CAPABILITY: &str = "hasCapability";
    pub const HAS_CONTEXT: &str = "hasContext";
    pub const HAS_LOCATION: &str = "hasLocation";
    pub const HAS_SUBJECT: &str = "hasSubject";
    pub const HAS_ACTION: &str = "hasAction";
    pub const HAS_INSTRUMENT: &str = "hasInstrument";
    pub const HAS_GOAL: &str = "hasGoal";
    pub const SUB_GOAL_OF: &str = "subGoalOf";
    pub const REQUIRES_CAPABILITY: &str = "requiresCapability";
    pub const RELATES_TO: &str = "relatesTo";
    pub const RELATION_FROM: &str = "relationFrom";
    pub const INVOLVES_USER: &str = "involvesUser";
    pub const CONCERNS_OBJECT: &str = "concernsObject";
    pub const ASSISTS: &str = "assists";
    pub const CONTACT_ABOUT: &str = "contactAbout";

    pub const OBJECT: &[&str] = &[
        HAS_COMPONENT,
        HAS_CAPABILITY,
        HAS_CONTEXT,
        HAS_LOCATION,
        HAS_SUBJECT,
        HAS_ACTION,
        HAS_INSTRUMENT,
        HAS_GOAL,
        SUB_GOAL_OF,
        REQUIRES_CAPABILITY,
        RELATES_TO,
        RELATION_FROM,
        INVOLVES_USER,
        CONCERNS_OBJECT,
        ASSISTS,
        CONTACT_ABOUT,
    ];

    pub const LATITUDE: &str = "latitude";
    pub const LONGITUDE: &str = "longitude";
    pub const ALTITUDE: &str = "altitude";
    pub const IN_DISTRICT: &str = "inDistrict";
    pub const IN_STREET: &str = "inStreet";
    pub const IN_BUILDING: &str = "inBuilding";
    pub const ON_FLOOR: &str = "onFloor";
    pub const IN_ROOM: &str = "inRoom";
    pub const IS_FUNCTIONING: &str = "isFunctioning";
    pub const TIMESTAMP: &str = "timestamp";
    pub const TIME_START: &str = "timeStart";
    pub const TIME_END: &str = "timeEnd";
    pub const QUALITY: &str = "quality";
    pub const FUNCTION: &str = "function";
    pub const PROFILE_ENTRY: &str = "profileEntry";
    pub const PREFERENCE_ENTRY: &str = "preferenceEntry";
    pub const ASSISTANCE_NEED: &str = "assistanceNeed";
    pub const AID_TYPE: &str = "aidType";
    pub const LABEL: &str = "label";
    pub const ACTION_NAME: &str = "actionName";
    pub const GOAL_MODE: &str = "goalMode";
    pub const ACTION_VERB: &str = "actionVerb";
    pub const PURPOSE: &str = "purpose";
    pub const CONTACT_ROLE: &str = "contactRole";
    pub const CONTACT_FUNCTION: &str = "contactFunction";
    pub const MESSAGE_KIND: &str = "messageKind";

    pub const DATA: &[&str] = &[
        LATITUDE,
        LONGITUDE,
        ALTITUDE,
        IN_DISTRICT,
        IN_STREET,
        IN_BUILDING,
        ON_FLOOR,
        IN_ROOM,
        IS_FUNCTIONING,
        TIMESTAMP,
        TIME_START,
        TIME_END,
        QUALITY,
        FUNCTION,
        PROFILE_ENTRY,
        PREFERENCE_ENTRY,
        ASSISTANCE_NEED,
        AID_TYPE,
        LABEL,
        ACTION_NAME,
        GOAL_MODE,
        ACTION_VERB,
        PURPOSE,
        CONTACT_ROLE,
        CONTACT_FUNCTION,
        MESSAGE_KIND,
    ];
}

pub mod capability {
    pub const ACCELERATION: &str = "Acceleration";
    pub const PRESENCE: &str = "Presence";
    pub const DISPLAY: &str = "Display";
    pub const AUDIO: &str = "Audio";
    pub const TOUCH_INPUT: &str = "TouchInput";
    pub const BUTTON_INPUT: &str = "ButtonInput";
    pub const LIGHT: &str = "Light";

    pub const ALL: &[&str] = &[
        ACCELERATION,
        PRESENCE,
        DISPLAY,
        AUDIO,
        TOUCH_INPUT,
        BUTTON_INPUT,
        LIGHT,
    ];
}
