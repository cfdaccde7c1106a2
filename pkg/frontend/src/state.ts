// Session state and the card view-models the renderer draws from.
// All fitness figures in a view-model are verbatim API values.

import {
  ApiError,
  Candidate,
  PopulationResponse,
  RatingEntry,
  SessionApi,
  SessionSummary,
} from './api.js'

export const RATING_LEVELS = [1, 2, 3, 4, 5, 6, 7] as const
export const DEFAULT_LEVEL = 4

export interface CardClassBox {
  attributes: string[]
  methods: string[]
  frozen: boolean
  canFreeze: boolean
  classIndex: number
}

export interface CandidateCard {
  index: number
  couplingBadge: string
  rating: number | null
  levels: readonly number[]
  classes: CardClassBox[]
}

export interface BudgetView {
  generation: number
  evaluations: number
  cap: number
  remaining: number
  exhausted: boolean
}

export class SessionController {
  session: SessionSummary | null = null
  population: PopulationResponse | null = null
  ratings = new Map<number, number>()
  warnings: string[] = []

  constructor(private readonly api: SessionApi) {}

  get engineSupportsFreezing(): boolean {
    return this.session?.engine === 'aco'
  }

  async create(
    problem: string,
    engine: string,
    options: { seed?: number; evaluation_cap?: number } = {},
  ): Promise<void> {
    this.session = await this.api.createSession(problem, engine, options)
    this.ratings.clear()
    this.warnings = []
    await this.refreshPopulation()
  }

  async refreshSession(): Promise<void> {
    if (!this.session) throw new Error('no session')
    this.session = await this.api.getSession(this.session.id)
  }

  async refreshPopulation(): Promise<void> {
    if (!this.session) throw new Error('no session')
    if (this.session.status !== 'active') {
      this.population = null
      return
    }
    this.population = await this.api.getPopulation(this.session.id)
  }

  rate(index: number, level: number): void {
    if (!this.population) throw new Error('no population to rate')
    if (!RATING_LEVELS.includes(level as (typeof RATING_LEVELS)[number])) {
      throw new Error(`rating level must be 1..7, got ${level}`)
    }
    if (!this.population.candidates.some((c) => c.index === index)) {
      throw new Error(`no candidate ${index}`)
    }
    this.ratings.set(index, level)
  }

  budget(): BudgetView {
    if (!this.session) throw new Error('no session')
    return {
      generation: this.session.generation,
      evaluations: this.session.evaluations,
      cap: this.session.evaluation_cap,
      remaining: this.session.evaluation_cap - this.session.evaluations,
      exhausted: this.session.status !== 'active',
    }
  }

  cards(): CandidateCard[] {
    if (!this.population) return []
    const canFreeze = this.engineSupportsFreezing
    const frozenNameSets = this.population.frozen_classes.map(
      (group) => new Set(group.names),
    )
    return this.population.candidates.map((candidate: Candidate) => ({
      index: candidate.index,
      couplingBadge: candidate.f_cbo.toFixed(1),
      rating: this.ratings.get(candidate.index) ?? null,
      levels: RATING_LEVELS,
      classes: candidate.classes.map((box, classIndex) => {
        const names = new Set([...box.attributes, ...box.methods])
        const frozen = frozenNameSets.some(
          (group) =>
            group.size > 0 && [...group].every((name) => names.has(name)),
        )
        return {
          attributes: box.attributes,
          methods: box.methods,
          classIndex,
          canFreeze,
          frozen,
        }
      }),
    }))
  }

  /** Fill unrated cards with the midpoint level, recording a warning each. */
  completeRatings(): RatingEntry[] {
    if (!this.population) throw new Error('no population to rate')
    this.warnings = []
    const entries: RatingEntry[] = []
    for (const candidate of this.population.candidates) {
      let level = this.ratings.get(candidate.index)
      if (level === undefined) {
        level = DEFAULT_LEVEL
        this.warnings.push(
          `candidate ${candidate.index} was not rated; defaulted to ${DEFAULT_LEVEL}`,
        )
      }
      entries.push({ index: candidate.index, level })
    }
    return entries
  }

  /**
   * Post the ratings and advance one generation.  On a conflict (another
   * mutation in flight) the session is re-fetched and the entered ratings
   * are kept so the caller can retry without losing input.
   */
  async submitGeneration(): Promise<SessionSummary> {
    if (!this.session) throw new Error('no session')
    const entries = this.completeRatings()
    try {
      this.session = await this.api.submitRatings(this.session.id, entries)
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        await this.refreshSession()
        if (this.session.status === 'active') await this.refreshPopulation()
        throw error
      }
      throw error
    }
    this.ratings.clear()
    if (this.session.status === 'active') {
      await this.refreshPopulation()
    } else {
      this.population = null
    }
    return this.session
  }

  async freeze(candidateIndex: number, classIndex: number): Promise<number[]> {
    if (!this.session) throw new Error('no session')
    const result = await this.api.freezeClass(
      this.session.id,
      candidateIndex,
      classIndex,
    )
    await this.refreshSession()
    await this.refreshPopulation()
    return result.frozen
  }

  async unfreeze(elements: number[]): Promise<void> {
    if (!this.session) throw new Error('no session')
    await this.api.unfreezeClass(this.session.id, elements)
    await this.refreshSession()
    await this.refreshPopulation()
  }
}
