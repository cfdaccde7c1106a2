// Typed client for the session service. Every number shown in the UI comes
// from these responses; the client never computes fitness values itself.

export interface ClassBox {
  attributes: string[]
  methods: string[]
}

export interface Candidate {
  index: number
  feasible: boolean
  f_cbo: number
  classes: ClassBox[]
}

export interface FrozenClass {
  elements: number[]
  names: string[]
}

export interface PopulationResponse {
  generation: number
  evaluations: number
  frozen_classes: FrozenClass[]
  candidates: Candidate[]
}

export interface BestSoFar {
  fitness: number
  f_cbo: number
  generation: number
  classes: ClassBox[]
}

export interface SessionSummary {
  id: string
  problem: string
  engine: string
  status: string
  generation: number
  evaluations: number
  evaluation_cap: number
  frozen_classes: FrozenClass[]
  best_so_far: BestSoFar | null
}

export interface RatingEntry {
  index: number
  level: number
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`)
  }
}

async function parse<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText
    try {
      const body = await response.json()
      if (body && typeof body.detail === 'string') detail = body.detail
      else if (body) detail = JSON.stringify(body.detail ?? body)
    } catch {
      // keep the status text
    }
    throw new ApiError(response.status, detail)
  }
  return response.json() as Promise<T>
}

export class SessionApi {
  constructor(private readonly baseUrl: string = '') {}

  async createSession(
    problem: string,
    engine: string,
    options: { seed?: number; evaluation_cap?: number } = {},
  ): Promise<SessionSummary> {
    const response = await fetch(`${this.baseUrl}/sessions`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ problem, engine, ...options }),
    })
    return parse<SessionSummary>(response)
  }

  async getSession(id: string): Promise<SessionSummary> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}`)
    return parse<SessionSummary>(response)
  }

  async getPopulation(id: string): Promise<PopulationResponse> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/population`)
    return parse<PopulationResponse>(response)
  }

  async submitRatings(
    id: string,
    ratings: RatingEntry[],
  ): Promise<SessionSummary> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/ratings`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(ratings),
    })
    return parse<SessionSummary>(response)
  }

  async freezeClass(
    id: string,
    candidate: number,
    classIndex: number,
  ): Promise<{ frozen: number[] }> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/freeze`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ candidate, class: classIndex }),
    })
    return parse<{ frozen: number[] }>(response)
  }

  async unfreezeClass(
    id: string,
    elements: number[],
  ): Promise<{ unfrozen: number[] }> {
    const response = await fetch(`${this.baseUrl}/sessions/${id}/freeze`, {
      method: 'DELETE',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ class: elements }),
    })
    return parse<{ unfrozen: number[] }>(response)
  }
}
