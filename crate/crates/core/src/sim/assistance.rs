//! The assistance behavior an agent runs after a fall: offer a cancel
//! window, then look for a caregiver, then call emergency services.
//!
//! [`assistance_behavior`] is a pure transition function. The simulator
//! resolves devices and contacts before calling it and turns the returned
//! actions into trace records and timers.

use crate::id::EntityId;

use super::scenario::{AssistanceConfig, EscalationMode};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum AssistanceState {
    #[default]
    Idle,
    CancelWindow {
        subject: EntityId,
        deadline: i64,
        /// False when the delay could not be shown; the person then
        /// counts as not having cancelled.
        offer_shown: bool,
    },
    SeekingCaregiver {
        subject: EntityId,
        caregiver: EntityId,
        deadline: i64,
    },
    /// Absorbing.
    Done { subject: EntityId },
}

impl AssistanceState {
    pub fn name(&self) -> &'static str {
        match self {
            AssistanceState::Idle => "Idle",
            AssistanceState::CancelWindow { .. } => "CancelWindow",
            AssistanceState::SeekingCaregiver { .. } => "SeekingCaregiver",
            AssistanceState::Done { .. } => "Done",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssistanceInput {
    FallDeduced {
        t: i64,
        subject: EntityId,
        offer_shown: bool,
    },
    /// A press on a device able to receive the cancellation.
    ButtonPress { t: i64, user: EntityId },
    /// A timer came due. `caregiver` is the best contact at that moment.
    Deadline {
        t: i64,
        caregiver: Option<EntityId>,
    },
    CaregiverAck { t: i64, user: EntityId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AssistanceAction {
    CancelOffered { subject: EntityId, deadline: i64 },
    CancelUnavailable { subject: EntityId, deadline: i64 },
    AssistanceCancelled { subject: EntityId },
    NotifyCaregiver {
        subject: EntityId,
        caregiver: EntityId,
        deadline: i64,
    },
    NotifyEmergency { subject: EntityId },
    AssistanceCompleted {
        subject: EntityId,
        caregiver: EntityId,
    },
    /// Ask for a [`AssistanceInput::Deadline`] at this time.
    Timer(i64),
}

pub fn assistance_behavior(
    state: &AssistanceState,
    input: &AssistanceInput,
    config: &AssistanceConfig,
) -> (AssistanceState, Vec<AssistanceAction>) {
    use AssistanceAction as A;
    use AssistanceInput as I;
    use AssistanceState as S;
    match (state, input) {
        (
            S::Idle,
            I::FallDeduced {
                t,
                subject,
                offer_shown,
            },
        ) => {
            let deadline = t + config.cancel_window_ms;
            let announce = if *offer_shown {
                A::CancelOffered {
                    subject: subject.clone(),
                    deadline,
                }
            } else {
                A::CancelUnavailable {
                    subject: subject.clone(),
                    deadline,
                }
            };
            (
                S::CancelWindow {
                    subject: subject.clone(),
                    deadline,
                    offer_shown: *offer_shown,
                },
                vec![announce, A::Timer(deadline)],
            )
        }
        (
            S::CancelWindow {
                subject,
                deadline,
                offer_shown: true,
            },
            I::ButtonPress { t, user },
        ) if user == subject && t <= deadline => (
            S::Idle,
            vec![A::AssistanceCancelled {
                subject: subject.clone(),
            }],
        ),
        (S::CancelWindow { subject, deadline, .. }, I::Deadline { t, caregiver }) if t == deadline => {
            match caregiver {
                Some(c) => {
                    let ack_deadline = t + config.caregiver_ack_window_ms;
                    let mut actions = vec![A::NotifyCaregiver {
                        subject: subject.clone(),
                        caregiver: c.clone(),
                        deadline: ack_deadline,
                    }];
                    if config.escalation_mode == EscalationMode::Both {
                        actions.push(A::NotifyEmergency {
                            subject: subject.clone(),
                        });
                    }
                    actions.push(A::Timer(ack_deadline));
                    (
                        S::SeekingCaregiver {
                            subject: subject.clone(),
                            caregiver: c.clone(),
                            deadline: ack_deadline,
                        },
                        actions,
                    )
                }
                None => (
                    S::Done {
                        subject: subject.clone(),
                    },
                    vec![A::NotifyEmergency {
                        subject: subject.clone(),
                    }],
                ),
            }
        }
        (S::SeekingCaregiver { subject, caregiver, .. }, I::CaregiverAck { user, .. }) if user == caregiver => (
            S::Done {
                subject: subject.clone(),
            },
            vec![A::AssistanceCompleted {
                subject: subject.clone(),
                caregiver: caregiver.clone(),
            }],
        ),
        (S::SeekingCaregiver { subject, deadline, .. }, I::Deadline { t, .. }) if t == deadline => {
            let actions = if config.escalation_mode == EscalationMode::Both {
                // emergency services were alerted with the caregiver
                vec![]
            } else {
                vec![A::NotifyEmergency {
                    subject: subject.clone(),
                }]
            };
            (
                S::Done {
                    subject: subject.clone(),
                },
                actions,
            )
        }
        _ => (state.clone(), vec![]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::sc;

    fn cfg() -> AssistanceConfig {
        AssistanceConfig::default()
    }

    fn fall(t: i64, shown: bool) -> AssistanceInput {
        AssistanceInput::FallDeduced {
            t,
            subject: sc("john"),
            offer_shown: shown,
        }
    }

    #[test]
    fn idle_to_cancel_window() {
        let (s, acts) = assistance_behavior(&AssistanceState::Idle, &fall(10_000, true), &cfg());
        assert_eq!(s.name(), "CancelWindow");
        assert_eq!(acts.last(), Some(&AssistanceAction::Timer(40_000)));
    }

    #[test]
    fn press_cancels_even_at_deadline() {
        let (s, _) = assistance_behavior(&AssistanceState::Idle, &fall(0, true), &cfg());
        let press = AssistanceInput::ButtonPress {
            t: 30_000,
            user: sc("john"),
        };
        let (s2, acts) = assistance_behavior(&s, &press, &cfg());
        assert_eq!(s2, AssistanceState::Idle);
        assert!(matches!(acts[0], AssistanceAction::AssistanceCancelled { .. }));
        let other = AssistanceInput::ButtonPress {
            t: 1,
            user: sc("jane"),
        };
        assert_eq!(assistance_behavior(&s, &other, &cfg()).0, s);
    }

    #[test]
    fn press_ignored_when_offer_not_shown() {
        let (s, _) = assistance_behavior(&AssistanceState::Idle, &fall(0, false), &cfg());
        let press = AssistanceInput::ButtonPress {
            t: 5,
            user: sc("john"),
        };
        assert_eq!(assistance_behavior(&s, &press, &cfg()).0, s);
    }

    #[test]
    fn seeking_deadline_calls_emergency() {
        let state = AssistanceState::SeekingCaregiver {
            subject: sc("john"),
            caregiver: sc("jane"),
            deadline: 100_000,
        };
        let (s, acts) = assistance_behavior(
            &state,
            &AssistanceInput::Deadline {
                t: 100_000,
                caregiver: None,
            },
            &cfg(),
        );
        assert_eq!(s.name(), "Done");
        assert_eq!(acts, vec![AssistanceAction::NotifyEmergency { subject: sc("john") }]);
    }

    #[test]
    fn both_mode_alerts_together() {
        let config = AssistanceConfig {
            escalation_mode: EscalationMode::Both,
            ..cfg()
        };
        let (s, _) = assistance_behavior(&AssistanceState::Idle, &fall(0, true), &config);
        let (_, acts) = assistance_behavior(
            &s,
            &AssistanceInput::Deadline {
                t: 30_000,
                caregiver: Some(sc("jane")),
            },
            &config,
        );
        assert!(matches!(acts[0], AssistanceAction::NotifyCaregiver { .. }));
        assert!(matches!(acts[1], AssistanceAction::NotifyEmergency { .. }));
    }

    #[test]
    fn done_is_absorbing() {
        let done = AssistanceState::Done { subject: sc("john") };
        for input in [
            fall(1, true),
            AssistanceInput::CaregiverAck {
                t: 2,
                user: sc("jane"),
            },
        ] {
            assert_eq!(assistance_behavior(&done, &input, &cfg()), (done.clone(), vec![]));
        }
    }
}
