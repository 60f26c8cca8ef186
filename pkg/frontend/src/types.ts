/**
 * API payload types, mirroring the service's JSON contracts.
 */

export type ChallengeKind = 'standard' | 'recognition' | 'recall';
export type HintKind = 'reveal_letter' | 'unlock_cues' | 'eliminate_options';
export type StatsRange = 'day' | 'week' | 'month';

export interface RevealedLetter {
  index: number;
  letter: string;
}

export interface ChallengeView {
  challenge_id: string;
  kind: ChallengeKind;
  images: string[];
  cues_unlocked: boolean;
  letter_pool: string[] | null;
  options: string[] | null;
  /** only present for views that show the word length (standard challenges) */
  length?: number | null;
  revealed: RevealedLetter[];
  /** cue texts, present only once unlocked */
  cues?: string[] | null;
}

export interface SocialMessage {
  kind: string;
  text: string;
  celebrate: boolean;
}

export interface BadgeAward {
  kind: string;
  awarded_at: string;
  avatar_solved_count_at_award: number;
}

export interface AttributeQuestion {
  attribute_id: string;
  question: string;
}

export interface ProfileSummary {
  profile_id: string;
  attributes: AttributeQuestion[];
  values: Record<string, string> | null;
}

export interface PlayerCreated {
  player_id: string;
  token: string;
  token_expires_at: string;
  profile: ProfileSummary;
}

export interface SessionState {
  session_id: string;
  player_id: string;
  phase: string;
  score: number;
  recognition_done: number;
  recall_done: number;
  standard_remaining: number;
  avatar_solved_today: number;
  badges: BadgeAward[];
  ended: boolean;
  view: ChallengeView | null;
  message: SocialMessage | null;
}

export interface AnswerResult {
  correct: boolean;
  delta: number;
  score: number;
  phase: string;
  badges_awarded: string[];
  milestone: boolean;
  ended: boolean;
  view: ChallengeView | null;
  message: SocialMessage | null;
}

export interface HintResult {
  score: number;
  cost: number;
  free: boolean;
  view: ChallengeView;
}

export interface StatsBucket {
  day: string;
  correct: number;
}

export interface StatsReport {
  range: StatsRange;
  buckets: StatsBucket[];
  total_correct: number;
  stage: string;
  remaining_to_next_stage: number;
}

export interface NotificationInfo {
  message: SocialMessage;
  absent_hours: number;
}

export interface Notifications {
  reminder: NotificationInfo | null;
  free_hint_due: boolean;
}

export interface ResetQuestion {
  attribute_id: string;
  question: string;
}

export interface ResetAttempt {
  attempt_id: string;
  player_id: string;
  questions: ResetQuestion[];
}

export interface ResetOutcome {
  outcome: 'granted' | 'denied' | 'locked';
}
